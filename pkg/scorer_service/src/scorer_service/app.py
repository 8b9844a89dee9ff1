"""FastAPI application exposing the scorer protocol.

Endpoints (all scores in [0, 1], arrays aligned 1:1 with the request):

    POST /v1/embed   {"texts": [str]}                    -> {"vectors": [[float]]}
    POST /v1/match   {"pairs": [[str, str]]}             -> {"scores": [float]}
    POST /v1/quality {"topic", "stance", "arguments"}    -> {"scores": [float]}
    GET  /healthz                                        -> 200

Errors are 4xx with a JSON body {"error": "..."}. Every scoring response
carries an X-Scorer-Backend header naming the embedding backend, so a
degraded deployment (hashed features instead of a fine-tuned checkpoint)
is always visible to clients.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from scorer_service.embedders import Embedder, build_embedder

BATCH_CAP = 1024


class EmbedRequest(BaseModel):
    texts: list[str] = Field(default_factory=list)


class MatchRequest(BaseModel):
    pairs: list[tuple[str, str]] = Field(default_factory=list)


class QualityRequest(BaseModel):
    topic: str
    stance: int
    arguments: list[str] = Field(default_factory=list)


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def _cosine_to_unit(cos: np.ndarray) -> np.ndarray:
    return np.clip((cos + 1.0) / 2.0, 0.0, 1.0)


def _pair_scores(embedder: Embedder, pairs: Sequence[tuple[str, str]]) -> list[float]:
    texts: list[str] = []
    index: dict[str, int] = {}
    for a, b in pairs:
        for t in (a, b):
            if t not in index:
                index[t] = len(texts)
                texts.append(t)
    vectors = embedder.embed(texts)
    cosines = np.array([vectors[index[a]] @ vectors[index[b]] for a, b in pairs])
    return [float(s) for s in _cosine_to_unit(cosines)]


def create_app(embedder: Embedder | None = None) -> FastAPI:
    embedder = embedder if embedder is not None else build_embedder()
    app = FastAPI(title="scorer-service")
    app.state.embedder = embedder

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return _error(400, f"malformed request: {exc.errors()[:1]}")

    def _check_batch(items: list) -> JSONResponse | None:
        if not items:
            return _error(400, "empty batch")
        if len(items) > BATCH_CAP:
            return _error(413, f"batch of {len(items)} exceeds cap {BATCH_CAP}")
        return None

    headers = {"X-Scorer-Backend": embedder.name}

    @app.get("/healthz")
    async def healthz():
        return JSONResponse({"status": "ok", "backend": embedder.name}, headers=headers)

    @app.post("/v1/embed")
    async def embed(request: EmbedRequest):
        bad = _check_batch(request.texts)
        if bad is not None:
            return bad
        vectors = embedder.embed(request.texts)
        return JSONResponse({"vectors": vectors.tolist()}, headers=headers)

    @app.post("/v1/match")
    async def match(request: MatchRequest):
        bad = _check_batch(request.pairs)
        if bad is not None:
            return bad
        return JSONResponse(
            {"scores": _pair_scores(embedder, request.pairs)}, headers=headers
        )

    @app.post("/v1/quality")
    async def quality(request: QualityRequest):
        bad = _check_batch(request.arguments)
        if bad is not None:
            return bad
        if request.stance not in (-1, 1):
            return _error(400, f"stance must be -1 or +1, got {request.stance}")
        if not request.topic.strip():
            return _error(400, "topic must be non-empty")
        # Degraded-mode heuristic: argument-to-topic affinity. A fine-tuned
        # quality head would replace this; the header names what ran.
        pairs = [(argument, request.topic) for argument in request.arguments]
        return JSONResponse(
            {"scores": _pair_scores(embedder, pairs)}, headers=headers
        )

    return app


app = create_app()


def serve() -> None:  # pragma: no cover - thin uvicorn wrapper
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="Run the scorer service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8100)
    args = parser.parse_args()
    uvicorn.run(app, host=args.host, port=args.port)
