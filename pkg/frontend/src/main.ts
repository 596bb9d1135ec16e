/**
 * App bootstrap: wires the engine, server client, carousel, and settings.
 */

import { fetchConfig, GenerateClient, thumbnailUrl } from "./api.js";
import { CarouselStore } from "./carousel.js";
import {
    applyCursor,
    decayStep,
    EngineConfig,
    reset,
    RingGeometry,
    zeroValues,
} from "./engine.js";
import { drawCenterImage, drawRing } from "./ring_view.js";

const CANVAS_SIZE = 760;
const IMAGE_DISPLAY = 360; // fits inside the inner boundary circle

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

async function boot(): Promise<void> {
    const banner = el<HTMLDivElement>("banner");
    let serverConfig;
    try {
        serverConfig = await fetchConfig();
    } catch {
        banner.textContent = "server unreachable - interaction disabled";
        banner.style.display = "block";
        return;
    }

    const ring: RingGeometry = {
        cx: CANVAS_SIZE / 2,
        cy: CANVAS_SIZE / 2,
        baseRadius: 300,
        gain: 40,
    };
    const cfg: EngineConfig = {
        sensitivity: serverConfig.defaults.sensitivity,
        decayRate: serverConfig.defaults.decay_rate,
        decayEnabled: false,
        brushSigma: serverConfig.defaults.brush_sigma,
        dtCap: 0.05,
    };
    const values = zeroValues();

    const canvas = el<HTMLCanvasElement>("ring");
    canvas.width = CANVAS_SIZE;
    canvas.height = CANVAS_SIZE;
    const ctx = canvas.getContext("2d")!;

    const client = new GenerateClient();
    let bitmap: ImageBitmap | null = null;
    let dirty = true;
    client.onImage = async (data) => {
        bitmap = await createImageBitmap(new Blob([data], { type: "image/png" }));
    };
    client.onError = () => {
        banner.textContent = "generation request failed";
        banner.style.display = "block";
        setTimeout(() => (banner.style.display = "none"), 2000);
    };

    // --- cursor interaction -------------------------------------------------
    let prevT: number | null = null;
    canvas.addEventListener("pointermove", (ev) => {
        const rect = canvas.getBoundingClientRect();
        const x = ((ev.clientX - rect.left) / rect.width) * CANVAS_SIZE;
        const y = ((ev.clientY - rect.top) / rect.height) * CANVAS_SIZE;
        const t = performance.now() / 1000;
        if (prevT === null) prevT = t;
        applyCursor(values, { x, y, t }, prevT, ring, cfg);
        prevT = t;
        dirty = true;
    });
    canvas.addEventListener("pointerleave", () => {
        prevT = null;
    });

    // --- carousel -----------------------------------------------------------
    const carousel = new CarouselStore();
    const strip = el<HTMLDivElement>("carousel");
    carousel.onChange = () => {
        strip.replaceChildren(
            ...carousel.items.map((rec) => {
                const cell = document.createElement("div");
                cell.className = "cell";
                const img = document.createElement("img");
                img.src = thumbnailUrl(rec.id);
                img.title = rec.created_at;
                img.addEventListener("click", () => {
                    const restored = carousel.restore(rec.id);
                    values.set(restored);
                    dirty = true;
                });
                const x = document.createElement("button");
                x.className = "x";
                x.textContent = "x";
                x.addEventListener("click", (ev) => {
                    ev.stopPropagation();
                    void carousel.remove(rec.id);
                });
                cell.append(img, x);
                return cell;
            }),
        );
    };
    void carousel.refresh();

    // left-clicking anywhere captures the current sample
    document.addEventListener("click", (ev) => {
        const target = ev.target as HTMLElement;
        if (target.closest("#carousel") || target.closest("#settings")) {
            return;
        }
        void carousel.save(values);
    });

    // --- settings -----------------------------------------------------------
    const decayToggle = el<HTMLInputElement>("decay-toggle");
    const decaySlider = el<HTMLInputElement>("decay-rate");
    const sensSlider = el<HTMLInputElement>("sensitivity");
    decaySlider.value = String(cfg.decayRate);
    sensSlider.value = String(cfg.sensitivity);
    decayToggle.addEventListener("change", () => (cfg.decayEnabled = decayToggle.checked));
    decaySlider.addEventListener("input", () => (cfg.decayRate = Number(decaySlider.value)));
    sensSlider.addEventListener("input", () => (cfg.sensitivity = Number(sensSlider.value)));
    el<HTMLButtonElement>("reset").addEventListener("click", () => {
        reset(values);
        dirty = true;
    });

    // --- frame loop -----------------------------------------------------------
    let lastFrame = performance.now() / 1000;
    const frame = () => {
        const now = performance.now() / 1000;
        const dt = now - lastFrame;
        lastFrame = now;
        if (cfg.decayEnabled && dt > 0 && values.some((v) => v !== 0)) {
            decayStep(values, dt, cfg);
            dirty = true;
        }
        if (dirty) {
            client.request(values);
            dirty = false;
        }
        ctx.fillStyle = "#111";
        ctx.fillRect(0, 0, CANVAS_SIZE, CANVAS_SIZE);
        drawCenterImage(ctx, ring, bitmap, IMAGE_DISPLAY);
        drawRing(ctx, ring, values);
        requestAnimationFrame(frame);
    };
    client.request(values); // initial image: the latent origin
    requestAnimationFrame(frame);
}

void boot();
