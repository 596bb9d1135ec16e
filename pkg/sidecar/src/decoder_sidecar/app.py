"""Wire-protocol server: conformance echo mode or a wrapped checkpoint."""

from __future__ import annotations

import io
import math
import threading

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from PIL import Image
from starlette.concurrency import run_in_threadpool

DIMS = 512
IMAGE_SIZE = 512

# reference zero-latent geometry (shared contract with the workbench decoder):
# square outline with corners (176,176)-(336,336), stroke 2, opacity 0.5
_SQUARE_LO = 176.0
_SQUARE_HI = 336.0
_HALFWIDTH = 1.5  # stroke/2 + 0.5
_AMPLITUDE = 127.5  # 255 * opacity


def conformance_image() -> np.ndarray:
    """Rasterize the reference square outline (independent implementation)."""
    px = np.arange(IMAGE_SIZE, dtype=np.float64) + 0.5
    py = px[:, None]
    corners = [
        (_SQUARE_LO, _SQUARE_LO),
        (_SQUARE_HI, _SQUARE_LO),
        (_SQUARE_HI, _SQUARE_HI),
        (_SQUARE_LO, _SQUARE_HI),
    ]
    canvas = np.zeros((IMAGE_SIZE, IMAGE_SIZE), dtype=np.float64)
    for k in range(4):
        ax, ay = corners[k]
        bx, by = corners[(k + 1) % 4]
        vx, vy = bx - ax, by - ay
        l2 = vx * vx + vy * vy
        t = np.clip(((px - ax) * vx + (py - ay) * vy) / l2, 0.0, 1.0)
        dist = np.sqrt((px - (ax + t * vx)) ** 2 + (py - (ay + t * vy)) ** 2)
        np.maximum(canvas, _AMPLITUDE * np.clip(_HALFWIDTH - dist, 0.0, 1.0), out=canvas)
    return np.floor(canvas).astype(np.uint8)


def _encode_png(img: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(img, mode="L").save(buf, format="PNG")
    return buf.getvalue()


class CallGate:
    """Admission control: one model call at a time, bounded waiting queue.

    admit()/leave() are non-blocking and safe on the event loop; run() does
    the blocking wait for the single execution slot and belongs in a worker
    thread.
    """

    def __init__(self, depth: int = 8):
        self.depth = depth
        self._running = threading.Semaphore(1)
        self._admitted = 0
        self._lock = threading.Lock()

    def admit(self) -> bool:
        with self._lock:
            if self._admitted >= self.depth:
                return False
            self._admitted += 1
            return True

    def run(self, fn, *args):
        self._running.acquire()
        try:
            return fn(*args)
        finally:
            self._running.release()

    def leave(self) -> None:
        with self._lock:
            self._admitted -= 1


def _load_checkpoint(path: str):
    """Wrap a serialized torch module as latent -> grayscale-uint8-image.

    The z-to-model-input mapping is deployment specific; this wrapper feeds
    the raw 512 values as a (1, 512) float tensor and grayscales the output.
    """
    import torch

    model = torch.jit.load(path) if path.endswith(".pt") else torch.load(path, weights_only=False)
    model.eval()

    def decode(latent: np.ndarray) -> np.ndarray:
        with torch.no_grad():
            out = model(torch.as_tensor(latent, dtype=torch.float32).reshape(1, DIMS))
        arr = out.detach().cpu().numpy().squeeze()
        if arr.ndim == 3:  # channels-first color output
            arr = arr.mean(axis=0)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise RuntimeError(f"model output is not a square image: {arr.shape}")
        lo, hi = float(arr.min()), float(arr.max())
        if hi > lo:
            arr = (arr - lo) / (hi - lo) * 255.0
        return arr.astype(np.uint8)

    return decode


def create_app(checkpoint: str | None = None, queue_depth: int = 8) -> FastAPI:
    app = FastAPI(title="decoder-sidecar", docs_url=None, redoc_url=None)
    gate = CallGate(depth=queue_depth)

    if checkpoint:
        model_decode = _load_checkpoint(checkpoint)
    else:
        reference = conformance_image()

        def model_decode(latent: np.ndarray) -> np.ndarray:
            return reference

    app.state.decode = model_decode  # patchable in tests

    @app.post("/generate")
    async def generate(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return JSONResponse({"detail": "invalid JSON body"}, status_code=400)
        latent = payload.get("latent") if isinstance(payload, dict) else None
        if not isinstance(latent, list) or len(latent) != DIMS:
            return JSONResponse(
                {"detail": f"expected {DIMS} latent variables"}, status_code=400
            )
        values = np.empty(DIMS)
        for i, x in enumerate(latent):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                return JSONResponse(
                    {"detail": "latent values must be finite numbers"}, status_code=400
                )
            values[i] = float(x)
        seq = payload.get("seq", 0)

        if not gate.admit():
            return JSONResponse({"detail": "overloaded"}, status_code=503)
        try:
            img = await run_in_threadpool(gate.run, app.state.decode, values)
        except Exception as exc:
            return JSONResponse({"detail": f"model failure: {exc}"}, status_code=503)
        finally:
            gate.leave()
        return Response(
            content=_encode_png(img),
            media_type="image/png",
            headers={"X-Seq": str(seq)},
        )

    @app.get("/healthz")
    def healthz():
        return {"mode": "checkpoint" if checkpoint else "conformance"}

    return app
