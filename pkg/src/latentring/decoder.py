"""Latent-to-image decoding.

The built-in decoder is a deterministic procedural generator: the 512 latent
coordinates are read as 16 blocks of 32, each block parameterizing one
rotated, corner-perturbed quadrilateral outline drawn with anti-aliased
strokes onto a 512x512 black canvas (white-on-black, per-pixel max
compositing). It stands in for a neural decoder so the whole system runs and
tests deterministically; real checkpoints can be driven instead through the
HTTP wire protocol via ExternalDecoder.

Block layout (u = z[32b + k] / 3, each in [-1, 1]):
    u1, u2   -> quad center = image center + 160 * u (pixels)
    u3, u4   -> half extents = 20 + 60 * (u + 1)
    u5       -> rotation = pi * u
    u6       -> stroke width = 2 + u
    u7       -> opacity = (u + 1) / 2; quads with opacity < 0.2 are invisible
    u8..u15  -> per-corner (dx, dy) offsets, 8 * u pixels
    u0, u16..u31 are reserved and never affect the output.

Geometry is computed relative to the image center (pixel ix samples
ix + 0.5 - 256); since float negation is lossless this makes the horizontal
mirror latent map an exact image flip, bit for bit.

Wire protocol (shared with the serving layer and any external decoder):
POST {endpoint}/generate with JSON {"latent": [512 numbers], "seq": n};
response is an image/png body, 8-bit grayscale square, echoing the request
sequence number in the X-Seq header. 400 on malformed latent, 503 on
overload.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
import requests

from . import _backend
from .images import decode_png
from .latent import validate_latent

IMAGE_SIZE = 512
HALF = IMAGE_SIZE / 2.0
BLOCKS = 16
BLOCK_DIMS = 32
ALPHA_GATE = 0.2

# local corner order: top-left, top-right, bottom-right, bottom-left
_CORNER_SIGNS = ((-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0))
# reflection about a vertical axis swaps corners 0<->1 and 2<->3
_MIRROR_CORNER = (1, 0, 3, 2)


class DecoderUnavailable(RuntimeError):
    """External decoder did not answer in time."""


class ProtocolViolation(RuntimeError):
    """External decoder answered outside the wire protocol."""


@dataclass
class QuadPrimitive:
    """One block's outline; center coordinates are image-center-relative."""

    cx: float
    cy: float
    half_w: float
    half_h: float
    rotation: float
    stroke: float
    opacity: float
    corner_offsets: tuple[tuple[float, float], ...]

    def corners(self) -> list[tuple[float, float]]:
        """Rotated, offset corner positions (center-relative, px)."""
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        pts = []
        for k, (sx, sy) in enumerate(_CORNER_SIGNS):
            lx = sx * self.half_w
            ly = sy * self.half_h
            ox, oy = self.corner_offsets[k]
            pts.append((self.cx + (c * lx - s * ly) + ox, self.cy + (s * lx + c * ly) + oy))
        return pts

    def corners_abs(self) -> list[tuple[float, float]]:
        return [(HALF + x, HALF + y) for x, y in self.corners()]


def quads_from_latent(z: np.ndarray) -> list[QuadPrimitive]:
    u = np.asarray(z, dtype=np.float64).reshape(BLOCKS, BLOCK_DIMS) / 3.0
    quads = []
    for b in range(BLOCKS):
        quads.append(
            QuadPrimitive(
                cx=160.0 * u[b, 1],
                cy=160.0 * u[b, 2],
                half_w=20.0 + 60.0 * (u[b, 3] + 1.0),
                half_h=20.0 + 60.0 * (u[b, 4] + 1.0),
                rotation=math.pi * u[b, 5],
                stroke=1.0 + (u[b, 6] + 1.0),
                opacity=(u[b, 7] + 1.0) / 2.0,
                corner_offsets=tuple(
                    (8.0 * u[b, 8 + 2 * k], 8.0 * u[b, 9 + 2 * k]) for k in range(4)
                ),
            )
        )
    return quads


def _segments(z: np.ndarray) -> np.ndarray:
    segs = []
    for quad in quads_from_latent(z):
        if quad.opacity < ALPHA_GATE:
            continue
        pts = quad.corners()
        hw = quad.stroke / 2.0 + 0.5
        amp = 255.0 * quad.opacity
        for k in range(4):
            ax, ay = pts[k]
            bx, by = pts[(k + 1) % 4]
            segs.append((ax, ay, bx, by, hw, amp))
    return np.asarray(segs, dtype=np.float64).reshape(-1, 6)


def decode(z, *, backend: str | None = None) -> np.ndarray:
    """Decode a latent vector to a 512x512 uint8 sketch. Pure and deterministic."""
    z = validate_latent(z)
    segs = _segments(z)
    canvas = np.zeros((IMAGE_SIZE, IMAGE_SIZE), dtype=np.float64)
    if len(segs):
        _backend.raster_segments(segs, canvas, -HALF, -HALF, backend=backend)
    # truncating quantization: a fully covered stroke at opacity 0.5 lands on 127
    return np.floor(canvas).astype(np.uint8)


def mirror_z(z) -> np.ndarray:
    """Latent counterpart of a horizontal image flip.

    Per block: negate the center x, negate the rotation, and negate the x
    component of every corner offset while swapping offsets between
    horizontally mirrored corner slots, so decode(mirror_z(z)) is exactly the
    left-right flip of decode(z).
    """
    out = np.asarray(z, dtype=np.float64).copy()
    for b in range(BLOCKS):
        base = b * BLOCK_DIMS
        out[base + 1] = -out[base + 1]
        out[base + 5] = -out[base + 5]
        offsets = [(out[base + 8 + 2 * k], out[base + 9 + 2 * k]) for k in range(4)]
        for k in range(4):
            ox, oy = offsets[_MIRROR_CORNER[k]]
            out[base + 8 + 2 * k] = -ox
            out[base + 9 + 2 * k] = oy
    return out


class ExternalDecoder:
    """Client for decoders behind the wire protocol, e.g. a model sidecar.

    Bounds concurrent requests (default 4) with a semaphore; safe to share
    across threads.
    """

    def __init__(self, endpoint: str, timeout: float = 10.0, max_in_flight: int = 4):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self._slots = threading.Semaphore(max_in_flight)

    def decode(self, z, seq: int = 0) -> np.ndarray:
        z = validate_latent(z)
        with self._slots:
            try:
                resp = requests.post(
                    f"{self.endpoint}/generate",
                    json={"latent": [float(x) for x in z], "seq": int(seq)},
                    timeout=self.timeout,
                )
            except requests.RequestException as exc:
                raise DecoderUnavailable("decoder unavailable") from exc
        if resp.status_code == 503:
            raise DecoderUnavailable("decoder unavailable")
        if resp.status_code != 200:
            raise ProtocolViolation(f"protocol violation: status {resp.status_code}")
        if resp.headers.get("content-type", "").split(";")[0] != "image/png":
            raise ProtocolViolation("protocol violation: response is not image/png")
        if resp.headers.get("X-Seq") != str(int(seq)):
            raise ProtocolViolation("protocol violation: missing or wrong X-Seq echo")
        try:
            img = decode_png(resp.content)
        except Exception as exc:
            raise ProtocolViolation(f"protocol violation: {exc}") from exc
        if img.ndim != 2 or img.shape[0] != img.shape[1]:
            raise ProtocolViolation("protocol violation: image is not square grayscale")
        return img


def decode_external(z, endpoint: str, timeout: float = 10.0, seq: int = 0) -> np.ndarray:
    """One-shot convenience wrapper around ExternalDecoder."""
    return ExternalDecoder(endpoint, timeout=timeout).decode(z, seq=seq)
