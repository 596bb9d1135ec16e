/**
 * Saved-samples carousel state: an ordered list mirroring the server store.
 */

import { deleteSample, listSamples, SampleRecord, saveSample } from "./api.js";

export class CarouselStore {
    items: SampleRecord[] = [];
    onChange: (() => void) | null = null;

    constructor(private base = "") {}

    async refresh(): Promise<void> {
        this.items = await listSamples(this.base);
        this.onChange?.();
    }

    async save(latent: ArrayLike<number>): Promise<SampleRecord> {
        const rec = await saveSample(latent, this.base);
        this.items.push(rec); // server appends; insertion order is carousel order
        this.onChange?.();
        return rec;
    }

    /** The stored latent, exactly as the server returned it. */
    restore(id: string): number[] {
        const rec = this.items.find((r) => r.id === id);
        if (!rec) {
            throw new Error("not found");
        }
        return rec.latent.slice();
    }

    async remove(id: string): Promise<void> {
        await deleteSample(id, this.base);
        const idx = this.items.findIndex((r) => r.id === id);
        if (idx >= 0) {
            this.items.splice(idx, 1); // remaining order preserved
        }
        this.onChange?.();
    }
}
