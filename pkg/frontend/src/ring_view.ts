/**
 * Canvas rendering: 512 radial tick marks between two thin boundary circles,
 * the generated image in the center.
 */

import { RingGeometry, TICK_COUNT, tickExtent } from "./engine.js";

export function drawRing(
    ctx: CanvasRenderingContext2D,
    ring: RingGeometry,
    values: Float64Array,
): void {
    const { cx, cy, baseRadius, gain } = ring;

    ctx.lineWidth = 1;
    ctx.strokeStyle = "#555";
    for (const r of [baseRadius - gain, baseRadius + gain]) {
        ctx.beginPath();
        ctx.arc(cx, cy, r, 0, 2 * Math.PI);
        ctx.stroke();
    }

    ctx.lineWidth = 1.5;
    const step = (2 * Math.PI) / TICK_COUNT;
    for (let i = 0; i < TICK_COUNT; i++) {
        const phi = i * step;
        const ux = Math.sin(phi);
        const uy = -Math.cos(phi);
        const rOuter = tickExtent(values[i], ring);
        ctx.strokeStyle = values[i] >= 0 ? "#7ec8ff" : "#ffb27e";
        ctx.beginPath();
        ctx.moveTo(cx + baseRadius * ux, cy + baseRadius * uy);
        ctx.lineTo(cx + rOuter * ux, cy + rOuter * uy);
        ctx.stroke();
    }
}

export function drawCenterImage(
    ctx: CanvasRenderingContext2D,
    ring: RingGeometry,
    bitmap: ImageBitmap | null,
    size: number,
): void {
    const half = size / 2;
    if (bitmap) {
        ctx.drawImage(bitmap, ring.cx - half, ring.cy - half, size, size);
    } else {
        ctx.fillStyle = "#000";
        ctx.fillRect(ring.cx - half, ring.cy - half, size, size);
    }
    ctx.strokeStyle = "#333";
    ctx.strokeRect(ring.cx - half, ring.cy - half, size, size);
}
