import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latentring.latent import V_MAX
from latentring.ring import (
    CursorEvent,
    InteractionConfig,
    TickRingState,
    angle_to_index,
    apply_cursor,
    decay_step,
    reset,
)


def make_ring(**kw):
    return TickRingState(center=kw.pop("center", (0.0, 0.0)), **kw)


class TestAngleToIndex:
    def test_top_is_zero(self):
        assert angle_to_index((0.0, -310.0), make_ring()) == 0

    def test_right_is_quarter_turn(self):
        assert angle_to_index((310.0, 0.0), make_ring()) == 128

    def test_bottom_and_left(self):
        assert angle_to_index((0.0, 310.0), make_ring()) == 256
        assert angle_to_index((-310.0, 0.0), make_ring()) == 384

    def test_nearest_tick_rounding(self):
        phi = 2.0 * math.pi * 3.4 / 512.0
        pos = (300.0 * math.sin(phi), -300.0 * math.cos(phi))
        assert angle_to_index(pos, make_ring()) == 3

    def test_center_is_undefined(self):
        with pytest.raises(ValueError, match="undefined angle"):
            angle_to_index((0.0, 0.0), make_ring())

    def test_offset_center(self):
        ring = make_ring(center=(400.0, 400.0))
        assert angle_to_index((400.0, 100.0), ring) == 0
        assert angle_to_index((700.0, 400.0), ring) == 128


class TestApplyCursor:
    def test_zero_drive_at_base_radius(self):
        ring = make_ring()
        cfg = InteractionConfig(brush_sigma=0.0)
        out = apply_cursor(CursorEvent(0.0, -300.0, 0.1), 0.0, ring, cfg)
        assert np.array_equal(out.values, np.zeros(512))

    def test_outside_band_is_noop(self):
        ring = make_ring(values=np.linspace(-1, 1, 512))
        cfg = InteractionConfig()
        out = apply_cursor(CursorEvent(0.0, -380.0, 0.1), 0.0, ring, cfg)
        assert np.array_equal(out.values, ring.values)

    def test_direct_update_formula(self):
        # cursor at top, r = R_b + G, sigma 0, eta 2, dt 0.1 -> values[0] = 0.2
        ring = make_ring()
        cfg = InteractionConfig(sensitivity=2.0, brush_sigma=0.0, dt_cap=1.0)
        out = apply_cursor(CursorEvent(0.0, -340.0, 0.1), 0.0, ring, cfg)
        assert out.values[0] == pytest.approx(0.2, abs=1e-15)
        assert np.count_nonzero(out.values) == 1

    def test_gaussian_brush_weights(self):
        ring = make_ring()
        sigma = 1.5
        cfg = InteractionConfig(sensitivity=2.0, brush_sigma=sigma, dt_cap=1.0)
        out = apply_cursor(CursorEvent(0.0, -340.0, 0.1), 0.0, ring, cfg)
        radius = math.ceil(3 * sigma)
        assert np.count_nonzero(out.values) == 2 * radius + 1
        for delta in range(radius + 1):
            expected = 0.2 * math.exp(-(delta**2) / (2 * sigma**2))
            assert out.values[delta] == pytest.approx(expected, rel=1e-12)
            assert out.values[-delta] == pytest.approx(expected, rel=1e-12)

    def test_inward_drive_is_negative(self):
        ring = make_ring()
        cfg = InteractionConfig(sensitivity=2.0, brush_sigma=0.0, dt_cap=1.0)
        out = apply_cursor(CursorEvent(0.0, -260.0, 0.1), 0.0, ring, cfg)
        assert out.values[0] == pytest.approx(-0.2, abs=1e-15)

    def test_dt_cap(self):
        ring = make_ring()
        cfg = InteractionConfig(sensitivity=2.0, brush_sigma=0.0, dt_cap=0.05)
        out = apply_cursor(CursorEvent(0.0, -340.0, 10.0), 0.0, ring, cfg)
        assert out.values[0] == pytest.approx(2.0 * 0.05, abs=1e-15)

    def test_clamp_at_vmax(self):
        ring = make_ring(values=np.full(512, 2.95))
        cfg = InteractionConfig(sensitivity=100.0, brush_sigma=0.0, dt_cap=1.0)
        out = apply_cursor(CursorEvent(0.0, -340.0, 1.0), 0.0, ring, cfg)
        assert out.values[0] == V_MAX

    def test_nonfinite_event_rejected(self):
        ring = make_ring(values=np.linspace(-1, 1, 512))
        cfg = InteractionConfig()
        for ev in (
            CursorEvent(float("nan"), -320.0, 0.1),
            CursorEvent(0.0, float("inf"), 0.1),
            CursorEvent(0.0, -320.0, float("nan")),
        ):
            out = apply_cursor(ev, 0.0, ring, cfg)
            assert np.array_equal(out.values, ring.values)


class TestDecay:
    def test_half_life_identity(self):
        ring = make_ring(values=np.ones(512))
        cfg = InteractionConfig(decay_rate=math.log(2.0), decay_enabled=True)
        out = decay_step(ring, 1.0, cfg)
        assert np.all(out.values == pytest.approx(0.5, abs=1e-12))

    def test_zero_is_fixed_point(self):
        ring = make_ring()
        cfg = InteractionConfig(decay_rate=2.0, decay_enabled=True)
        out = decay_step(ring, 5.0, cfg)
        assert np.array_equal(out.values, np.zeros(512))

    def test_zero_rate_is_identity(self):
        vals = np.linspace(-2, 2, 512)
        ring = make_ring(values=vals.copy())
        cfg = InteractionConfig(decay_rate=0.0, decay_enabled=True)
        out = decay_step(ring, 3.0, cfg)
        assert np.array_equal(out.values, vals)

    def test_snap_to_zero(self):
        ring = make_ring(values=np.full(512, 1e-4))
        cfg = InteractionConfig(decay_rate=1.0, decay_enabled=True)
        out = decay_step(ring, 0.1, cfg)
        assert np.array_equal(out.values, np.zeros(512))


class TestReset:
    def test_reset_zeroes_everything(self):
        ring = make_ring(values=np.random.default_rng(0).uniform(-3, 3, 512))
        assert np.array_equal(reset(ring).values, np.zeros(512))

    def test_reset_is_idempotent(self):
        ring = reset(make_ring(values=np.ones(512)))
        assert np.array_equal(reset(ring).values, np.zeros(512))

    def test_reset_then_decay_stays_zero(self):
        cfg = InteractionConfig(decay_rate=1.0, decay_enabled=True)
        ring = decay_step(reset(make_ring(values=np.ones(512))), 1.0, cfg)
        assert np.array_equal(ring.values, np.zeros(512))


@st.composite
def cursor_events(draw):
    r = draw(st.floats(0.0, 500.0, allow_nan=False))
    phi = draw(st.floats(0.0, 2 * math.pi, allow_nan=False))
    dt = draw(st.floats(0.0, 0.5, allow_nan=False))
    return r * math.sin(phi), -r * math.cos(phi), dt


class TestProperties:
    @settings(max_examples=40, deadline=None)
    @given(st.lists(cursor_events(), min_size=1, max_size=60), st.floats(0.0, 4.0))
    def test_clamp_safety_under_any_sequence(self, events, sigma):
        ring = make_ring()
        cfg = InteractionConfig(sensitivity=80.0, brush_sigma=sigma, dt_cap=0.25)
        t = 0.0
        for x, y, dt in events:
            prev, t = t, t + dt
            ring = apply_cursor(CursorEvent(x, y, t), prev, ring, cfg)
        assert np.all(np.isfinite(ring.values))
        assert np.all(np.abs(ring.values) <= V_MAX)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(cursor_events(), min_size=1, max_size=30))
    def test_sigma_zero_touches_at_most_one_tick(self, events):
        cfg = InteractionConfig(brush_sigma=0.0, dt_cap=0.25)
        ring = make_ring()
        t = 0.0
        for x, y, dt in events:
            prev, t = t, t + dt
            nxt = apply_cursor(CursorEvent(x, y, t), prev, ring, cfg)
            assert np.count_nonzero(nxt.values != ring.values) <= 1
            ring = nxt

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.floats(-3.0, 3.0), min_size=1, max_size=16),
        st.floats(0.0, 2.0),
        st.floats(0.01, 3.0),
    )
    def test_decay_monotone_and_sign_preserving(self, some_vals, dt, rate):
        vals = np.resize(np.asarray(some_vals), 512)
        cfg = InteractionConfig(decay_rate=rate, decay_enabled=True)
        out = decay_step(make_ring(values=vals.copy()), dt, cfg)
        assert np.all(np.abs(out.values) <= np.abs(vals) + 1e-15)
        nonsnapped = out.values != 0.0
        assert np.all(np.sign(out.values[nonsnapped]) == np.sign(vals[nonsnapped]))

    def test_determinism_identical_traces(self):
        rng = np.random.default_rng(9)
        events = [
            CursorEvent(float(x), float(y), float(t))
            for x, y, t in zip(
                rng.uniform(-400, 400, 50),
                rng.uniform(-400, 400, 50),
                np.sort(rng.uniform(0, 5, 50)),
            )
        ]
        cfg = InteractionConfig(brush_sigma=1.5)
        results = []
        for _ in range(2):
            ring = make_ring()
            t0 = events[0].timestamp
            for ev in events:
                ring = apply_cursor(ev, t0, ring, cfg)
                t0 = ev.timestamp
            results.append(ring.values)
        assert np.array_equal(results[0], results[1])

    def test_tick_extents_stay_in_band(self):
        ring = make_ring(values=np.random.default_rng(3).uniform(-3, 3, 512))
        ext = ring.tick_extents()
        assert np.all(ext >= ring.base_radius - ring.gain)
        assert np.all(ext <= ring.base_radius + ring.gain)
