"""HTTP scoring service.

Endpoints:
    GET  /healthz        200 with the model id once weights are loaded, else 503
    GET  /v1/meta        input frame and normalization the model scores at
    GET  /v1/labels      class-name table in index order
    POST /v1/score       one base64 PNG in, softmax probabilities out
    POST /v1/score_batch list of base64 PNGs in, one result per image

Errors: 400 for undecodable payloads, 413 for oversize payloads, 503 while
no model is loaded.
"""

from __future__ import annotations

import base64
import binascii
import io
import os
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from PIL import Image
from pydantic import BaseModel

from .model import IMAGENET_MEAN, IMAGENET_STD, ModelInfo, ModelLoadError, ScoringModel

DEFAULT_MAX_BYTES = 16 * 1024 * 1024


class ScoreRequest(BaseModel):
    image: str  # base64-encoded PNG (or JPEG) bytes


class ScoreResponse(BaseModel):
    probs: list[float]
    top1: int
    model_id: str


class BatchRequest(BaseModel):
    images: list[str]


class BatchResponse(BaseModel):
    results: list[ScoreResponse]


def _parse_size(raw: str | None) -> tuple[int, int]:
    if not raw:
        return (224, 224)
    parts = [int(p) for p in raw.replace("x", ",").split(",") if p.strip()]
    if len(parts) == 1:
        return (parts[0], parts[0])
    return (parts[0], parts[1])


def _parse_triple(raw: str | None, default) -> tuple[float, float, float]:
    if not raw:
        return default
    parts = [float(p) for p in raw.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated floats, got {raw!r}")
    return (parts[0], parts[1], parts[2])


def create_app(
    model_path: str | None = None,
    labels_path: str | None = None,
    input_size: tuple[int, int] | None = None,
    mean: tuple[float, float, float] | None = None,
    std: tuple[float, float, float] | None = None,
    max_bytes: int | None = None,
) -> FastAPI:
    """Build the service; unset arguments fall back to SCORING_* env vars."""
    model_path = model_path or os.environ.get("SCORING_MODEL")
    labels_path = labels_path or os.environ.get("SCORING_LABELS")
    input_size = input_size or _parse_size(os.environ.get("SCORING_INPUT_SIZE"))
    mean = mean or _parse_triple(os.environ.get("SCORING_MEAN"), IMAGENET_MEAN)
    std = std or _parse_triple(os.environ.get("SCORING_STD"), IMAGENET_STD)
    max_bytes = max_bytes or int(os.environ.get("SCORING_MAX_BYTES", DEFAULT_MAX_BYTES))

    app = FastAPI(title="scoring-service")
    app.state.model = None
    app.state.labels = None
    app.state.max_bytes = max_bytes

    if model_path:
        info = ModelInfo(
            model_id=Path(model_path).stem, input_size=input_size, mean=mean, std=std
        )
        try:
            app.state.model = ScoringModel(model_path, info)
        except ModelLoadError as exc:
            # leave the service up but unloaded; health reports 503
            app.state.load_error = str(exc)
    if labels_path:
        with open(labels_path, encoding="utf-8") as fh:
            app.state.labels = [line.rstrip("\n") for line in fh if line.strip()]

    def require_model() -> ScoringModel:
        if app.state.model is None:
            raise HTTPException(status_code=503, detail="model not loaded")
        return app.state.model

    def decode_image(payload: str) -> np.ndarray:
        if len(payload) > app.state.max_bytes:
            raise HTTPException(status_code=413, detail="payload too large")
        try:
            raw = base64.b64decode(payload, validate=True)
        except (binascii.Error, ValueError):
            raise HTTPException(status_code=400, detail="invalid base64") from None
        if len(raw) > app.state.max_bytes:
            raise HTTPException(status_code=413, detail="payload too large")
        try:
            with Image.open(io.BytesIO(raw)) as img:
                return np.asarray(img.convert("RGB"), dtype=np.float32) / 255.0
        except Exception:
            raise HTTPException(status_code=400, detail="undecodable image") from None

    def score_one(model: ScoringModel, payload: str) -> ScoreResponse:
        probs = model.probabilities(decode_image(payload))
        return ScoreResponse(
            probs=probs.tolist(), top1=int(np.argmax(probs)), model_id=model.info.model_id
        )

    @app.get("/healthz")
    def healthz():
        model = require_model()
        return {"status": "ok", "model_id": model.info.model_id}

    @app.get("/v1/meta")
    def meta():
        model = require_model()
        return {
            "model_id": model.info.model_id,
            "input_size": list(model.info.input_size),
            "mean": list(model.info.mean),
            "std": list(model.info.std),
            "num_classes": model.num_classes,
        }

    @app.get("/v1/labels")
    def labels():
        model = require_model()
        if app.state.labels is not None:
            return app.state.labels
        if model.num_classes is None:
            # class count is only known after a first inference
            model.probabilities(np.zeros((*model.info.input_size[::-1], 3), dtype=np.float32))
        return [f"class_{i}" for i in range(model.num_classes)]

    @app.post("/v1/score", response_model=ScoreResponse)
    def score(request: ScoreRequest):
        return score_one(require_model(), request.image)

    @app.post("/v1/score_batch", response_model=BatchResponse)
    def score_batch(request: BatchRequest):
        model = require_model()
        return BatchResponse(results=[score_one(model, payload) for payload in request.images])

    return app
