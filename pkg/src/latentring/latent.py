"""Latent vector domain: 512 bounded scalars shared by the ring, decoder and server."""

from __future__ import annotations

import numpy as np

DIMS = 512
V_MAX = 3.0


class MalformedLatent(ValueError):
    """Raised when a latent vector violates the length/finiteness/range contract."""


def validate_latent(values, *, clamp: bool = False) -> np.ndarray:
    """Return a float64 copy of ``values`` checked against the latent contract.

    Length must be exactly 512 and every element finite. Out-of-range values
    are clamped to [-V_MAX, V_MAX] when ``clamp`` is set, rejected otherwise.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape != (DIMS,):
        raise MalformedLatent(
            f"malformed latent: expected {DIMS} latent variables, got {arr.size}"
        )
    if not np.all(np.isfinite(arr)):
        raise MalformedLatent("malformed latent: non-finite value")
    if clamp:
        return np.clip(arr, -V_MAX, V_MAX)
    if np.any(np.abs(arr) > V_MAX):
        raise MalformedLatent(f"malformed latent: value outside [-{V_MAX}, {V_MAX}]")
    return arr.copy()


def zero_latent() -> np.ndarray:
    return np.zeros(DIMS, dtype=np.float64)


def clamp_latent(values) -> np.ndarray:
    """Clamp into [-V_MAX, V_MAX] after validating length and finiteness."""
    return validate_latent(values, clamp=True)
