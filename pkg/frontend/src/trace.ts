/**
 * Interaction-trace parsing and replay (the cross-implementation test-vector
 * format): a JSON-lines header {R_b, G, eta, lambda, sigma, decay_enabled
 * [, cx, cy, dt_cap]} followed by {t, x, y} event records.
 */

import {
    applyCursor,
    CursorEvent,
    decayStep,
    EngineConfig,
    RingGeometry,
    zeroValues,
} from "./engine.js";

export interface Trace {
    ring: RingGeometry;
    cfg: EngineConfig;
    events: CursorEvent[];
}

export function parseTrace(text: string): Trace {
    const lines = text
        .split("\n")
        .map((ln) => ln.trim())
        .filter((ln) => ln.length > 0);
    if (lines.length === 0) {
        throw new Error("empty trace file");
    }
    const header = JSON.parse(lines[0]);
    const ring: RingGeometry = {
        cx: header.cx ?? 0,
        cy: header.cy ?? 0,
        baseRadius: header.R_b,
        gain: header.G,
    };
    const cfg: EngineConfig = {
        sensitivity: header.eta,
        decayRate: header.lambda,
        decayEnabled: Boolean(header.decay_enabled),
        brushSigma: header.sigma,
        dtCap: header.dt_cap ?? 0.05,
    };
    const events: CursorEvent[] = [];
    let lastT = -Infinity;
    for (const ln of lines.slice(1)) {
        const rec = JSON.parse(ln);
        if (rec.t < lastT) {
            throw new Error("trace timestamps must be non-decreasing");
        }
        lastT = rec.t;
        events.push({ t: rec.t, x: rec.x, y: rec.y });
    }
    return { ring, cfg, events };
}

/** Replay from all-zero values; decay integrates over the full inter-event
 *  interval, then the cursor drive over the same interval capped at dtCap. */
export function replayTrace(trace: Trace): Float64Array {
    const values = zeroValues();
    let prevT: number | null = null;
    for (const ev of trace.events) {
        if (prevT === null) {
            prevT = ev.t;
        }
        const dt = ev.t - prevT;
        if (trace.cfg.decayEnabled && dt > 0) {
            decayStep(values, dt, trace.cfg);
        }
        applyCursor(values, ev, prevT, trace.ring, trace.cfg);
        prevT = ev.t;
    }
    return values;
}
