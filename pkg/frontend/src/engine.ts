/**
 * Tick-ring interaction engine.
 *
 * Byte-for-byte the same math as the backend's ring module: the shared trace
 * fixtures under tests/fixtures/traces pin both implementations to the same
 * outputs (within 1e-6). Any change here must keep those fixtures green.
 *
 * Angle convention: index 0 at 12 o'clock, clockwise, screen y down.
 */

export const TICK_COUNT = 512;
export const V_MAX = 3.0;
export const SNAP_EPS = 1e-4;

export interface RingGeometry {
    cx: number;
    cy: number;
    baseRadius: number; // R_b, px
    gain: number; // G, px: max tick extent and half-width of the active band
}

export interface EngineConfig {
    sensitivity: number; // value-units per second at full drive
    decayRate: number; // 1/s
    decayEnabled: boolean;
    brushSigma: number; // ticks
    dtCap: number; // seconds
}

export interface CursorEvent {
    x: number;
    y: number;
    t: number; // seconds, monotonic
}

export function zeroValues(): Float64Array {
    return new Float64Array(TICK_COUNT);
}

export function angleToIndex(x: number, y: number, ring: RingGeometry): number {
    const dx = x - ring.cx;
    const dy = y - ring.cy;
    if (dx === 0 && dy === 0) {
        throw new Error("undefined angle");
    }
    const tau = 2 * Math.PI;
    let phi = Math.atan2(dx, -dy) % tau;
    if (phi < 0) phi += tau;
    const step = tau / TICK_COUNT;
    return Math.floor(phi / step + 0.5) % TICK_COUNT;
}

/** Integrate one cursor event into `values` (in place). Dead-zone events and
 *  non-finite input leave the array untouched. */
export function applyCursor(
    values: Float64Array,
    ev: CursorEvent,
    prevT: number,
    ring: RingGeometry,
    cfg: EngineConfig,
): void {
    if (!Number.isFinite(ev.x) || !Number.isFinite(ev.y) || !Number.isFinite(ev.t)) {
        return;
    }
    const dx = ev.x - ring.cx;
    const dy = ev.y - ring.cy;
    const r = Math.sqrt(dx * dx + dy * dy);
    if (r < ring.baseRadius - ring.gain || r > ring.baseRadius + ring.gain) {
        return;
    }
    let drive = (r - ring.baseRadius) / ring.gain;
    drive = Math.max(-1, Math.min(1, drive));
    const dt = Math.min(ev.t - prevT, cfg.dtCap);
    const index = angleToIndex(ev.x, ev.y, ring);
    const twoSigmaSq = 2 * cfg.brushSigma * cfg.brushSigma;
    if (twoSigmaSq === 0) {
        const step = cfg.sensitivity * drive * dt;
        values[index] = Math.max(-V_MAX, Math.min(V_MAX, values[index] + step));
        return;
    }
    const radius = Math.ceil(3 * cfg.brushSigma);
    const half = TICK_COUNT / 2;
    const lo = Math.max(-radius, -(half - 1));
    const hi = Math.min(radius, half);
    for (let off = lo; off <= hi; off++) {
        const j = (((index + off) % TICK_COUNT) + TICK_COUNT) % TICK_COUNT;
        const w = Math.exp(-(off * off) / twoSigmaSq);
        const step = cfg.sensitivity * drive * w * dt;
        values[j] = Math.max(-V_MAX, Math.min(V_MAX, values[j] + step));
    }
}

/** Exponential relaxation toward zero; magnitudes below SNAP_EPS snap to 0. */
export function decayStep(values: Float64Array, dt: number, cfg: EngineConfig): void {
    const factor = Math.exp(-cfg.decayRate * dt);
    for (let i = 0; i < values.length; i++) {
        const v = values[i] * factor;
        values[i] = Math.abs(v) < SNAP_EPS ? 0 : v;
    }
}

export function reset(values: Float64Array): void {
    values.fill(0);
}

/** Outer radius of each rendered tick (inner when the value is negative). */
export function tickExtent(value: number, ring: RingGeometry): number {
    return ring.baseRadius + (value / V_MAX) * ring.gain;
}
