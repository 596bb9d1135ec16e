/**
 * Server client: throttled image generation with stale-response discarding,
 * plus the config and carousel endpoints.
 *
 * Generation requests carry a monotonically increasing sequence number and
 * are paced to at most `maxPerSecond` sends with at most `maxInFlight`
 * outstanding; scheduling is latest-wins, so a burst of ring edits collapses
 * into the newest latent. A response whose echoed X-Seq is not above the
 * highest already delivered is dropped.
 */

import { V_MAX } from "./engine.js";

export interface ServerConfig {
    dims: number;
    image_size: number;
    v_max: number;
    defaults: { sensitivity: number; decay_rate: number; brush_sigma: number };
}

export interface SampleRecord {
    id: string;
    created_at: string;
    latent: number[];
}

export async function fetchConfig(base = ""): Promise<ServerConfig> {
    const resp = await fetch(`${base}/api/config`);
    if (!resp.ok) {
        throw new Error(`config fetch failed: ${resp.status}`);
    }
    return (await resp.json()) as ServerConfig;
}

function clampLatent(latent: ArrayLike<number>): number[] {
    if (latent.length !== 512) {
        throw new Error(`expected 512 latent variables, got ${latent.length}`);
    }
    const out = new Array<number>(512);
    for (let i = 0; i < 512; i++) {
        out[i] = Math.max(-V_MAX, Math.min(V_MAX, latent[i]));
    }
    return out;
}

export interface GenerateClientOptions {
    maxInFlight?: number;
    maxPerSecond?: number;
}

export class GenerateClient {
    onImage: ((data: ArrayBuffer, seq: number) => void) | null = null;
    onError: ((err: unknown) => void) | null = null;

    private base: string;
    private maxInFlight: number;
    private minIntervalMs: number;
    private seq = 0;
    private highestDelivered = -1;
    private inFlight = 0;
    private lastSendTime = -Infinity;
    private pending: number[] | null = null;
    private timer: ReturnType<typeof setTimeout> | null = null;

    constructor(base = "", opts: GenerateClientOptions = {}) {
        this.base = base;
        this.maxInFlight = opts.maxInFlight ?? 4;
        this.minIntervalMs = 1000 / (opts.maxPerSecond ?? 30);
    }

    /** Queue the newest latent for generation (earlier queued values are superseded). */
    request(latent: ArrayLike<number>): void {
        this.pending = clampLatent(latent);
        this.schedule();
    }

    get inFlightCount(): number {
        return this.inFlight;
    }

    get lastSeq(): number {
        return this.seq;
    }

    private schedule(): void {
        if (this.pending === null || this.inFlight >= this.maxInFlight) {
            return;
        }
        const wait = this.lastSendTime + this.minIntervalMs - Date.now();
        if (wait > 0) {
            if (this.timer === null) {
                this.timer = setTimeout(() => {
                    this.timer = null;
                    this.schedule();
                }, wait);
            }
            return;
        }
        this.send(this.pending);
        this.pending = null;
    }

    private send(latent: number[]): void {
        const seq = ++this.seq;
        this.lastSendTime = Date.now();
        this.inFlight++;
        fetch(`${this.base}/api/generate`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ latent, seq }),
        })
            .then(async (resp) => {
                if (!resp.ok) {
                    throw new Error(`generate failed: ${resp.status}`);
                }
                const echoed = Number(resp.headers.get("X-Seq") ?? seq);
                const data = await resp.arrayBuffer();
                if (echoed > this.highestDelivered) {
                    this.highestDelivered = echoed;
                    this.onImage?.(data, echoed);
                }
            })
            .catch((err) => this.onError?.(err))
            .finally(() => {
                this.inFlight--;
                this.schedule();
            });
    }
}

export async function saveSample(latent: ArrayLike<number>, base = ""): Promise<SampleRecord> {
    const resp = await fetch(`${base}/api/samples`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ latent: clampLatent(latent) }),
    });
    if (!resp.ok) {
        throw new Error(`save failed: ${resp.status}`);
    }
    return (await resp.json()) as SampleRecord;
}

export async function listSamples(base = ""): Promise<SampleRecord[]> {
    const resp = await fetch(`${base}/api/samples`);
    if (!resp.ok) {
        throw new Error(`list failed: ${resp.status}`);
    }
    return (await resp.json()) as SampleRecord[];
}

export async function deleteSample(id: string, base = ""): Promise<void> {
    const resp = await fetch(`${base}/api/samples/${id}`, { method: "DELETE" });
    if (resp.status === 404) {
        throw new Error("not found");
    }
    if (!resp.ok) {
        throw new Error(`delete failed: ${resp.status}`);
    }
}

export function thumbnailUrl(id: string, base = ""): string {
    return `${base}/api/samples/${id}/thumbnail`;
}
