"""Tick-ring interaction state machine.

512 radial tick marks surround the output image, one per latent coordinate.
Cursor events inside the boundary band [R_b - G, R_b + G] drive the tick under
the cursor angle (and a Gaussian neighborhood of it) up or down at a rate
proportional to the radial offset from the tick base circle; events outside
the band are exact no-ops. An optional exponential decay relaxes all values
back to the latent origin.

Angle convention: index 0 at 12 o'clock, increasing clockwise, with the
screen y axis pointing down. Tick i covers the radial segment
[R_b, R_b + (values[i] / V_MAX) * G]; negative values extend inward.

Interaction traces (the test-vector interchange format shared with the
browser UI) are JSON-lines files: the first line is a header object
{"R_b", "G", "eta", "lambda", "sigma", "decay_enabled"} with optional
"cx", "cy" (ring center, default 0: positions are center-relative) and
"dt_cap" (default 0.05 s); every following line is an event
{"t": seconds, "x": px, "y": px}. Replay starts from all-zero values at the
first event's timestamp; per event, decay (when enabled) integrates over the
full elapsed interval, then the cursor drive integrates over the same
interval capped at dt_cap. The expected output is the 512 values after the
last event, printed to 9 significant digits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .latent import DIMS, V_MAX, zero_latent

TICK_COUNT = DIMS
SNAP_EPS = 1e-4  # decayed magnitudes below this snap to exactly zero


@dataclass
class InteractionConfig:
    """Tuning knobs for the cursor-to-latent mapping."""

    sensitivity: float = 2.0  # value-units per second at full radial drive
    decay_rate: float = 0.7  # 1/seconds
    decay_enabled: bool = False
    brush_sigma: float = 1.5  # Gaussian angular falloff, in ticks
    dt_cap: float = 0.05  # seconds; bounds per-event drive integration

    def __post_init__(self):
        if not self.sensitivity > 0:
            raise ValueError("sensitivity must be > 0")
        if self.decay_rate < 0:
            raise ValueError("decay_rate must be >= 0")
        if self.brush_sigma < 0:
            raise ValueError("brush_sigma must be >= 0")
        if not self.dt_cap > 0:
            raise ValueError("dt_cap must be > 0")


@dataclass
class CursorEvent:
    x: float
    y: float
    timestamp: float


@dataclass
class TickRingState:
    """Ring geometry plus the 512 tick values it renders and edits."""

    center: tuple[float, float] = (0.0, 0.0)
    base_radius: float = 300.0
    gain: float = 40.0
    values: np.ndarray = field(default_factory=zero_latent)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (TICK_COUNT,):
            raise ValueError(f"ring requires exactly {TICK_COUNT} tick values")

    def tick_extents(self) -> np.ndarray:
        """Outer radius of each rendered tick; inside [R_b - G, R_b + G] by the clamp invariant."""
        return self.base_radius + (self.values / V_MAX) * self.gain


def angle_to_index(position: tuple[float, float], ring: TickRingState) -> int:
    """Map a cursor position to the tick index aligned with its angle.

    Clockwise from 12 o'clock in screen coordinates (y down), rounding to the
    nearest tick; exact half-tick boundaries round up (floor(x + 0.5)).
    """
    dx = position[0] - ring.center[0]
    dy = position[1] - ring.center[1]
    if dx == 0.0 and dy == 0.0:
        raise ValueError("undefined angle")
    phi = math.atan2(dx, -dy) % (2.0 * math.pi)
    step = 2.0 * math.pi / TICK_COUNT
    return int(math.floor(phi / step + 0.5)) % TICK_COUNT


def apply_cursor(
    event: CursorEvent,
    prev_timestamp: float,
    ring: TickRingState,
    cfg: InteractionConfig,
) -> TickRingState:
    """Integrate one cursor event into the ring values.

    Radial offset from the tick base circle sets the signed drive, saturating
    at the boundary lines; positions outside the boundary band leave the state
    bitwise untouched. Non-finite events are rejected (state unchanged).
    """
    if not (
        math.isfinite(event.x) and math.isfinite(event.y) and math.isfinite(event.timestamp)
    ):
        return ring
    dx = event.x - ring.center[0]
    dy = event.y - ring.center[1]
    r = math.sqrt(dx * dx + dy * dy)
    if r < ring.base_radius - ring.gain or r > ring.base_radius + ring.gain:
        return ring

    drive = (r - ring.base_radius) / ring.gain
    drive = max(-1.0, min(1.0, drive))
    dt = min(event.timestamp - prev_timestamp, cfg.dt_cap)
    index = angle_to_index((event.x, event.y), ring)

    values = ring.values.copy()
    sigma = cfg.brush_sigma
    two_sigma_sq = 2.0 * sigma * sigma
    if two_sigma_sq == 0.0:  # sigma 0 (or denormal-underflow): single-tick brush
        step = cfg.sensitivity * drive * dt
        values[index] = max(-V_MAX, min(V_MAX, values[index] + step))
    else:
        radius = math.ceil(3.0 * sigma)
        # offsets -255..256 already cover every tick once; clamping keeps the
        # circular distance |offset| correct for any sigma
        half = TICK_COUNT // 2
        for offset in range(max(-radius, -(half - 1)), min(radius, half) + 1):
            j = (index + offset) % TICK_COUNT
            delta = abs(offset)
            w = math.exp(-(delta * delta) / two_sigma_sq)
            step = cfg.sensitivity * drive * w * dt
            values[j] = max(-V_MAX, min(V_MAX, values[j] + step))
    return replace(ring, values=values)


def decay_step(ring: TickRingState, dt: float, cfg: InteractionConfig) -> TickRingState:
    """Relax all values toward zero by exp(-decay_rate * dt), snapping tiny magnitudes."""
    if dt < 0:
        raise ValueError("dt must be >= 0")
    factor = math.exp(-cfg.decay_rate * dt)
    values = ring.values * factor
    values[np.abs(values) < SNAP_EPS] = 0.0
    return replace(ring, values=values)


def reset(ring: TickRingState) -> TickRingState:
    """Immediately return all 512 values to exactly zero."""
    return replace(ring, values=zero_latent())


# --- interaction trace interchange format ---------------------------------


@dataclass
class InteractionTrace:
    ring: TickRingState
    cfg: InteractionConfig
    events: list[CursorEvent]


def load_trace(path) -> InteractionTrace:
    """Parse a JSON-lines interaction trace (header line, then event lines)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln for ln in (line.strip() for line in fh) if ln]
    if not lines:
        raise ValueError("empty trace file")
    header = json.loads(lines[0])
    ring = TickRingState(
        center=(float(header.get("cx", 0.0)), float(header.get("cy", 0.0))),
        base_radius=float(header["R_b"]),
        gain=float(header["G"]),
    )
    cfg = InteractionConfig(
        sensitivity=float(header["eta"]),
        decay_rate=float(header["lambda"]),
        decay_enabled=bool(header["decay_enabled"]),
        brush_sigma=float(header["sigma"]),
        dt_cap=float(header.get("dt_cap", 0.05)),
    )
    events = []
    last_t = -math.inf
    for ln in lines[1:]:
        rec = json.loads(ln)
        t = float(rec["t"])
        if t < last_t:
            raise ValueError("trace timestamps must be non-decreasing")
        last_t = t
        events.append(CursorEvent(x=float(rec["x"]), y=float(rec["y"]), timestamp=t))
    return InteractionTrace(ring=ring, cfg=cfg, events=events)


def save_trace(path, trace: InteractionTrace) -> None:
    header = {
        "R_b": trace.ring.base_radius,
        "G": trace.ring.gain,
        "eta": trace.cfg.sensitivity,
        "lambda": trace.cfg.decay_rate,
        "sigma": trace.cfg.brush_sigma,
        "decay_enabled": trace.cfg.decay_enabled,
        "cx": trace.ring.center[0],
        "cy": trace.ring.center[1],
        "dt_cap": trace.cfg.dt_cap,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header) + "\n")
        for ev in trace.events:
            fh.write(json.dumps({"t": ev.timestamp, "x": ev.x, "y": ev.y}) + "\n")


def replay_trace(trace: InteractionTrace) -> np.ndarray:
    """Run a trace from all-zero values; returns the final 512 values.

    Identical traces always produce identical arrays, which backs the
    cross-component fixtures shared with the browser engine.
    """
    ring = replace(trace.ring, values=zero_latent())
    prev_t = None
    for ev in trace.events:
        if prev_t is None:
            prev_t = ev.timestamp
        dt = ev.timestamp - prev_t
        if trace.cfg.decay_enabled and dt > 0:
            ring = decay_step(ring, dt, trace.cfg)
        ring = apply_cursor(ev, prev_t, ring, trace.cfg)
        prev_t = ev.timestamp
    return ring.values


def format_values(values: np.ndarray) -> list[str]:
    """Canonical 9-significant-digit rendering used by trace fixtures."""
    return [format(v, ".9g") for v in values]
