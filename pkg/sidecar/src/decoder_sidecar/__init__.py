"""External decoder sidecar for the latentring workbench.

Serves POST /generate per the decoder wire protocol: JSON body
{"latent": [512 numbers], "seq": n} -> image/png with an X-Seq echo header;
400 on malformed latents, 503 on overload. With --checkpoint it wraps a real
generative model; without one it runs a conformance echo mode that answers
every valid request with the reference zero-latent image (the centered square
outline), which is all the handshake tests need.
"""

from .app import create_app

__version__ = "0.1.0"

__all__ = ["create_app", "__version__"]
