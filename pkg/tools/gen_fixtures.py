"""Regenerates the pinned test fixtures (interaction traces + decoder baseline).

Run from the repo root: python3 tools/gen_fixtures.py
The outputs are committed; tests compare against them exactly.
"""

import json
import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from latentring.decoder import decode  # noqa: E402
from latentring.ring import (  # noqa: E402
    CursorEvent,
    InteractionConfig,
    InteractionTrace,
    TickRingState,
    format_values,
    replay_trace,
    save_trace,
)

FIXDIR = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")


def polar(r, phi_deg):
    """Screen-coordinate point at clockwise angle from 12 o'clock, center-relative."""
    phi = math.radians(phi_deg)
    return r * math.sin(phi), -r * math.cos(phi)


def build_traces():
    traces = {}

    # 1: gaussian brush, outward sweep, decay on
    cfg = InteractionConfig(sensitivity=2.0, decay_rate=0.7, decay_enabled=True, brush_sigma=1.5)
    events = []
    for k in range(72):
        t = k / 60.0
        x, y = polar(330.0, 5.0 + 90.0 * k / 71.0)
        events.append(CursorEvent(x, y, t))
    traces["trace01"] = InteractionTrace(TickRingState(), cfg, events)

    # 2: single-tick brush, inward drive, no decay, negative values
    cfg = InteractionConfig(sensitivity=3.0, decay_rate=0.0, decay_enabled=False, brush_sigma=0.0)
    events = []
    for k in range(90):
        t = k / 120.0
        x, y = polar(275.0, 180.0 + 25.0 * math.sin(k / 9.0))
        events.append(CursorEvent(x, y, t))
    traces["trace02"] = InteractionTrace(TickRingState(), cfg, events)

    # 3: dead-zone excursions interleaved with in-band strokes
    cfg = InteractionConfig(sensitivity=2.5, decay_rate=0.7, decay_enabled=False, brush_sigma=1.5)
    events = []
    t = 0.0
    for k in range(120):
        t += 1 / 75.0
        cycle = k % 8
        if cycle < 3:
            r = 325.0  # in band, growing
        elif cycle < 5:
            r = 380.0  # outside outer boundary: no-op
        elif cycle < 7:
            r = 282.0  # in band, reducing
        else:
            r = 220.0  # inside inner boundary: no-op
        x, y = polar(r, 250.0 + 1.7 * k)
        events.append(CursorEvent(x, y, t))
    traces["trace03"] = InteractionTrace(TickRingState(), cfg, events)

    # 4: spiral with an event-queue stall (dt cap engages), fast decay
    cfg = InteractionConfig(sensitivity=4.0, decay_rate=1.2, decay_enabled=True, brush_sigma=2.5)
    events = []
    t = 0.0
    for k in range(60):
        t += 1 / 50.0
        if k == 30:
            t += 0.8  # stall: decay integrates fully, drive is capped
        r = 285.0 + 50.0 * k / 59.0
        x, y = polar(r, 300.0 + 4.0 * k)
        events.append(CursorEvent(x, y, t))
    traces["trace04"] = InteractionTrace(TickRingState(), cfg, events)

    # 5: hard dwell at full drive until clamped, both directions; exact-boundary radii
    cfg = InteractionConfig(sensitivity=50.0, decay_rate=0.7, decay_enabled=False, brush_sigma=3.0)
    events = []
    t = 0.0
    for k in range(100):
        t += 1 / 40.0
        events.append(CursorEvent(*polar(340.0, 45.0), t))  # r = R_b + G exactly
    for k in range(60):
        t += 1 / 40.0
        events.append(CursorEvent(*polar(260.0, 225.0), t))  # r = R_b - G exactly
    traces["trace05"] = InteractionTrace(TickRingState(), cfg, events)
    return traces


def write_traces():
    outdir = os.path.join(FIXDIR, "traces")
    os.makedirs(outdir, exist_ok=True)
    for name, trace in build_traces().items():
        save_trace(os.path.join(outdir, f"{name}.jsonl"), trace)
        values = replay_trace(trace)
        with open(os.path.join(outdir, f"{name}.expected"), "w", encoding="utf-8") as fh:
            fh.write("".join(s + "\n" for s in format_values(values)))
        nz = int(np.count_nonzero(values))
        print(f"{name}: {len(trace.events)} events, {nz} nonzero values, "
              f"max |v| = {np.abs(values).max():.4f}")


def write_decoder_baseline():
    """Mean per-pixel response to small latent perturbations, pinned once.

    Pairs (z, i) are redrawn when the perturbation would cross a block's
    opacity gate, so the response measures the smooth raster path only.
    """
    rng = np.random.default_rng(2024)
    eps = 1e-3
    responses = []
    drawn = 0
    while len(responses) < 100:
        drawn += 1
        z = rng.uniform(-2.5, 2.5, 512)
        i = int(rng.integers(0, 512))
        zp = z.copy()
        zp[i] += eps
        block = i // 32
        alpha0 = (z[block * 32 + 7] / 3.0 + 1.0) / 2.0
        alpha1 = (zp[block * 32 + 7] / 3.0 + 1.0) / 2.0
        if (alpha0 < 0.2) != (alpha1 < 0.2):
            continue
        diff = np.abs(decode(zp).astype(np.float64) - decode(z).astype(np.float64))
        responses.append(diff.mean() / eps)
    baseline = {
        "epsilon": eps,
        "pairs": 100,
        "seed": 2024,
        "mean_abs_response": float(np.mean(responses)),
        "max_abs_response": float(np.max(responses)),
    }
    os.makedirs(FIXDIR, exist_ok=True)
    with open(os.path.join(FIXDIR, "decoder_sensitivity.json"), "w", encoding="utf-8") as fh:
        json.dump(baseline, fh, indent=2)
        fh.write("\n")
    print("decoder baseline:", baseline)


if __name__ == "__main__":
    write_traces()
    write_decoder_baseline()
