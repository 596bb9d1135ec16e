"""Kernel backend selection: compiled extension when available, NumPy otherwise.

Set LATENTRING_BACKEND=python or =native to force one (native raises if the
extension is missing), or call set_backend() at runtime. The benchmark module
compares the two.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _native

    HAVE_NATIVE = True
except ImportError:
    _native = None
    HAVE_NATIVE = False

_BACKENDS = {"python": _kernels_py}
if HAVE_NATIVE:
    _BACKENDS["native"] = _native

_active = os.environ.get("LATENTRING_BACKEND", "native" if HAVE_NATIVE else "python")
if _active not in _BACKENDS:
    raise ImportError(f"requested backend {_active!r} is not available")


def active_backend() -> str:
    return _active


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    _active = name


def get_kernels(name: str | None = None):
    return _BACKENDS[name or _active]


def raster_segments(
    segs, img, x_origin: float = 0.0, y_origin: float = 0.0, backend: str | None = None
) -> None:
    get_kernels(backend).raster_segments(segs, img, x_origin, y_origin)


def jv_solve(cost, backend: str | None = None):
    return get_kernels(backend).jv_solve(cost)


def tsne_step(p, p_eff, y, backend: str | None = None):
    return get_kernels(backend).tsne_step(p, p_eff, y)
