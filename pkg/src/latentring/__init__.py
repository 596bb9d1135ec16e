"""Interactive 512-D latent sketch workbench.

Direct per-variable manipulation of a latent vector through a tick-ring
interface, near-real-time procedural decoding, and a dataset atlas pipeline
(features -> t-SNE -> optimal grid assignment -> montage).
"""

from ._backend import active_backend, available_backends, set_backend
from .latent import DIMS, V_MAX, MalformedLatent, clamp_latent, validate_latent, zero_latent

__version__ = "0.1.0"

__all__ = [
    "DIMS",
    "V_MAX",
    "MalformedLatent",
    "active_backend",
    "available_backends",
    "clamp_latent",
    "set_backend",
    "validate_latent",
    "zero_latent",
    "__version__",
]
