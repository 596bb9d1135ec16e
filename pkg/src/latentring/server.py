"""HTTP service exposing generation, configuration, and carousel endpoints.

Endpoints (all JSON unless noted):
    POST   /api/generate            {"latent": [512], "seq": n} -> PNG + X-Seq
    GET    /api/config              dims / image size / value range / UI defaults
    POST   /api/samples             {"latent": [512]} -> saved sample record
    GET    /api/samples             ordered sample list
    GET    /api/samples/{id}/thumbnail  -> PNG
    DELETE /api/samples/{id}
    GET    /atlas.png               the dataset atlas montage, when configured
    GET    /                        built UI assets, when configured

/api/generate is stateless: responses depend only on the request body, with
out-of-range values clamped into [-3, 3] (UI float drift must not break the
loop). Staleness is the client's problem, solved by the echoed sequence
number. Decoder calls are bounded by a semaphore (default 4).
"""

from __future__ import annotations

import math
import os
import threading

from fastapi import FastAPI, Request, Response
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .decoder import DecoderUnavailable, ExternalDecoder, ProtocolViolation, decode
from .images import encode_png
from .latent import DIMS, V_MAX
from .store import SampleNotFound, SampleStore

DEFAULTS = {"sensitivity": 2.0, "decay_rate": 0.7, "brush_sigma": 1.5}


def _parse_latent(payload) -> tuple[list[float] | None, str | None]:
    if not isinstance(payload, dict) or "latent" not in payload:
        return None, "missing latent"
    latent = payload["latent"]
    if not isinstance(latent, list) or len(latent) != DIMS:
        return None, f"expected {DIMS} latent variables"
    values = []
    for x in latent:
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
            return None, "latent values must be finite numbers"
        values.append(min(V_MAX, max(-V_MAX, float(x))))
    return values, None


def create_app(
    decoder=None,
    store: SampleStore | None = None,
    ui_dir: str | None = None,
    atlas: str | None = None,
    max_parallel_decodes: int = 4,
) -> FastAPI:
    """Assemble the service; ``decoder`` is any latent -> image callable."""
    decoder = decoder or decode
    app = FastAPI(title="latentring", docs_url=None, redoc_url=None)
    decode_slots = threading.Semaphore(max_parallel_decodes)

    def run_decoder(values):
        with decode_slots:
            return decoder(values)

    @app.post("/api/generate")
    async def generate(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return JSONResponse({"detail": "invalid JSON body"}, status_code=400)
        values, err = _parse_latent(payload)
        if err:
            return JSONResponse({"detail": err}, status_code=400)
        seq = payload.get("seq", 0)
        if not isinstance(seq, int) or isinstance(seq, bool):
            return JSONResponse({"detail": "seq must be an integer"}, status_code=400)
        try:
            img = run_decoder(values)
        except DecoderUnavailable:
            return JSONResponse({"detail": "decoder unavailable"}, status_code=503)
        except ProtocolViolation as exc:
            return JSONResponse({"detail": str(exc)}, status_code=502)
        return Response(
            content=encode_png(img), media_type="image/png", headers={"X-Seq": str(seq)}
        )

    @app.get("/api/config")
    def config():
        return {
            "dims": DIMS,
            "image_size": 512,
            "v_max": V_MAX,
            "defaults": dict(DEFAULTS),
        }

    @app.post("/api/samples")
    async def save_sample(request: Request):
        if store is None:
            return JSONResponse({"detail": "no sample store configured"}, status_code=503)
        try:
            payload = await request.json()
        except Exception:
            return JSONResponse({"detail": "invalid JSON body"}, status_code=400)
        values, err = _parse_latent(payload)
        if err:
            return JSONResponse({"detail": err}, status_code=400)
        img = run_decoder(values)
        record = store.save_sample(values, img)
        return record.to_json()

    @app.get("/api/samples")
    def list_samples():
        if store is None:
            return []
        return [rec.to_json() for rec in store.list_samples()]

    @app.get("/api/samples/{sample_id}/thumbnail")
    def sample_thumbnail(sample_id: str):
        if store is None:
            return JSONResponse({"detail": "no sample store configured"}, status_code=503)
        try:
            thumb = store.thumbnail(sample_id)
        except SampleNotFound:
            return JSONResponse({"detail": "not found"}, status_code=404)
        return Response(content=encode_png(thumb), media_type="image/png")

    @app.delete("/api/samples/{sample_id}")
    def delete_sample(sample_id: str):
        if store is None:
            return JSONResponse({"detail": "no sample store configured"}, status_code=503)
        try:
            store.delete_sample(sample_id)
        except SampleNotFound:
            return JSONResponse({"detail": "not found"}, status_code=404)
        return {"deleted": sample_id}

    if atlas:
        atlas_path = os.path.abspath(atlas)

        @app.get("/atlas.png")
        def atlas_png():
            if not os.path.exists(atlas_path):
                return JSONResponse({"detail": "not found"}, status_code=404)
            return FileResponse(atlas_path, media_type="image/png")

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def make_decoder(spec: str):
    """Decoder factory for the --decoder flag: 'procedural' or 'external:<url>'."""
    if spec == "procedural":
        return decode
    if spec.startswith("external:"):
        client = ExternalDecoder(spec.split(":", 1)[1])
        return client.decode
    raise ValueError(f"unknown decoder spec {spec!r} (use procedural or external:<url>)")
