import json
import math
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import pytest

from latentring.decoder import (
    DecoderUnavailable,
    ProtocolViolation,
    decode,
    decode_external,
    mirror_z,
    quads_from_latent,
)
from latentring.images import encode_png
from latentring.latent import MalformedLatent


def ref_distance_to_segment(px, py, a, b):
    """Independent point-to-segment distance used by the geometry oracle."""
    ax, ay = a
    bx, by = b
    vx, vy = bx - ax, by - ay
    l2 = vx * vx + vy * vy
    if l2 == 0:
        return math.hypot(px - ax, py - ay)
    t = max(0.0, min(1.0, ((px - ax) * vx + (py - ay) * vy) / l2))
    return math.hypot(px - (ax + t * vx), py - (ay + t * vy))


def ref_square_outline_mask(lo=176.0, hi=336.0, halfwidth=1.5):
    """Brute-force oracle: pixels within `halfwidth` of the z=0 square outline."""
    corners = [(lo, lo), (hi, lo), (hi, hi), (lo, hi)]
    edges = [(corners[k], corners[(k + 1) % 4]) for k in range(4)]
    near = np.zeros((512, 512), dtype=bool)
    interior = np.zeros((512, 512), dtype=bool)
    for iy in range(150, 362):
        for ix in range(150, 362):
            px, py = ix + 0.5, iy + 0.5
            d = min(ref_distance_to_segment(px, py, a, b) for a, b in edges)
            near[iy, ix] = d < halfwidth
            interior[iy, ix] = d <= 0.5
    return near, interior


class TestZeroLatentGeometry:
    def test_square_outline_matches_reference(self):
        img = decode(np.zeros(512))
        near, interior = ref_square_outline_mask()
        nonzero = img > 0
        # every lit pixel sits on a stroke band, every fully covered pixel is lit
        assert not np.any(nonzero & ~near)
        assert np.all(nonzero[interior])
        # fully covered band pixels carry opacity 0.5 -> 127 (+-1)
        vals = img[interior].astype(int)
        assert vals.min() >= 126 and vals.max() <= 128

    def test_quad_parameters_at_zero(self):
        quads = quads_from_latent(np.zeros(512))
        assert len(quads) == 16
        for q in quads:
            assert (q.cx, q.cy) == (0.0, 0.0)
            assert q.half_w == q.half_h == 80.0
            assert q.stroke == 2.0
            assert q.opacity == 0.5
            assert [(round(x), round(y)) for x, y in q.corners_abs()] == [
                (176, 176), (336, 176), (336, 336), (176, 336),
            ]

    def test_background_corner_is_black(self):
        assert decode(np.zeros(512))[0, 0] == 0


class TestGatesAndInvariances:
    def test_opacity_gate_hides_one_block(self):
        z = np.zeros(512)
        z[7] = -3.0  # block 0 opacity -> 0, gated out; others still draw the square
        assert np.array_equal(decode(z), decode(np.zeros(512)))

    def test_opacity_gate_boundary(self):
        # alpha exactly at the gate is visible, just below is not
        z = np.zeros(512)
        z[np.arange(16) * 32 + 7] = -3.0
        z[7] = 3.0 * (2 * 0.2 - 1.0)  # block 0 alpha == 0.2
        assert decode(z).max() > 0
        z[7] -= 1e-9
        assert decode(z).max() == 0

    def test_reserved_dims_do_not_affect_output(self, rng):
        reserved = np.concatenate([[0], np.arange(16, 32)])
        for _ in range(20):
            z = rng.uniform(-3, 3, 512)
            z2 = z.copy()
            for b in range(16):
                z2[b * 32 + reserved] = rng.uniform(-3, 3, reserved.size)
            assert np.array_equal(decode(z), decode(z2))

    def test_determinism(self, rng):
        z = rng.uniform(-3, 3, 512)
        assert np.array_equal(decode(z), decode(z))

    def test_mirror_equivariance_exact(self, rng):
        for _ in range(25):
            z = rng.uniform(-3, 3, 512)
            assert np.array_equal(decode(mirror_z(z)), decode(z)[:, ::-1])

    def test_mirror_z_is_involution(self, rng):
        z = rng.uniform(-3, 3, 512)
        assert np.allclose(mirror_z(mirror_z(z)), z, atol=0)

    def test_output_range(self, rng):
        for _ in range(5):
            img = decode(rng.uniform(-3, 3, 512))
            assert img.dtype == np.uint8
            # max blend is bounded by 255 * max opacity = 255
            assert img.max() <= 255

    def test_malformed_latent_rejected(self):
        with pytest.raises(MalformedLatent, match="malformed latent"):
            decode(np.zeros(511))
        with pytest.raises(MalformedLatent, match="malformed latent"):
            decode(np.full(512, np.nan))
        with pytest.raises(MalformedLatent, match="malformed latent"):
            decode(np.full(512, 3.5))


class TestSensitivityBaseline:
    def test_perturbation_response_matches_pinned_baseline(self, fixtures_dir):
        with open(os.path.join(fixtures_dir, "decoder_sensitivity.json")) as fh:
            baseline = json.load(fh)
        rng = np.random.default_rng(baseline["seed"])
        eps = baseline["epsilon"]
        responses = []
        while len(responses) < baseline["pairs"]:
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
        measured = float(np.mean(responses))
        assert math.isfinite(measured)
        assert measured == pytest.approx(baseline["mean_abs_response"], rel=1e-12)


class _LoopbackHandler(BaseHTTPRequestHandler):
    mode = "ok"

    def do_POST(self):
        if self.path != "/generate":
            self.send_error(404)
            return
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        latent = body.get("latent", [])
        if len(latent) != 512:
            self.send_response(400)
            self.end_headers()
            return
        if self.mode == "wrong-media":
            payload = b"not a png"
            self.send_response(200)
            self.send_header("Content-Type", "text/plain")
            self.send_header("X-Seq", str(body.get("seq", 0)))
        elif self.mode == "no-seq":
            payload = encode_png(decode(np.asarray(latent)))
            self.send_response(200)
            self.send_header("Content-Type", "image/png")
        elif self.mode == "overload":
            self.send_response(503)
            self.end_headers()
            return
        else:
            payload = encode_png(decode(np.asarray(latent)))
            self.send_response(200)
            self.send_header("Content-Type", "image/png")
            self.send_header("X-Seq", str(body.get("seq", 0)))
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture
def loopback_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _LoopbackHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


class TestExternalDecoder:
    def test_loopback_byte_identical(self, loopback_server, rng):
        _LoopbackHandler.mode = "ok"
        z = rng.uniform(-3, 3, 512)
        img = decode_external(z, loopback_server, seq=7)
        assert np.array_equal(img, decode(z))

    def test_unreachable_endpoint(self):
        with pytest.raises(DecoderUnavailable, match="decoder unavailable"):
            decode_external(np.zeros(512), "http://127.0.0.1:1", timeout=0.5)

    def test_overload_maps_to_unavailable(self, loopback_server):
        _LoopbackHandler.mode = "overload"
        try:
            with pytest.raises(DecoderUnavailable):
                decode_external(np.zeros(512), loopback_server)
        finally:
            _LoopbackHandler.mode = "ok"

    def test_malformed_response_is_protocol_violation(self, loopback_server):
        for mode in ("wrong-media", "no-seq"):
            _LoopbackHandler.mode = mode
            try:
                with pytest.raises(ProtocolViolation, match="protocol violation"):
                    decode_external(np.zeros(512), loopback_server)
            finally:
                _LoopbackHandler.mode = "ok"
