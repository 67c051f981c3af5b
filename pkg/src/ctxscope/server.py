"""HTTP surface: /relate, /entity, /healthz, /meta, plus static UI assets.

All state is one immutable index on the app, so request handling is
stateless and repeated queries return byte-identical bodies (modulo the
elapsed-time field). Responses are serialized by the shared pipeline
serializer, not by the framework, to keep CLI and server output identical.
"""

from __future__ import annotations

import time
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import pipeline
from .errors import EmptyQueryError, NoSignalError, UnknownEntityError
from .index import KINDS, EntityId, SemanticIndex, load
from .ingest import load_stopwords, normalize_name
from .query import (
    DEFAULT_CANDIDATES,
    DEFAULT_DISPLAY,
    specificity_score,
    top_candidates,
)

MAX_K = 200
MAX_CANDIDATES = 10_000

_KIND_ALIASES = {k: k for k in KINDS} | {k[0]: k for k in KINDS}


def parse_types(value: str | None) -> frozenset[str] | None:
    """Comma list of entity kinds; single-letter aliases accepted. None = all."""
    if value is None or not value.strip():
        return None
    kinds = set()
    for part in value.split(","):
        part = part.strip().lower()
        if part not in _KIND_ALIASES:
            raise ValueError(f"unknown entity type {part!r}")
        kinds.add(_KIND_ALIASES[part])
    return frozenset(kinds)


def _bad_request(code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=400, content={"code": code, "message": message, **extra})


def create_app(
    index: SemanticIndex | None = None,
    index_path: str | Path | None = None,
    static_dir: str | Path | None = None,
    cors_origins: tuple[str, ...] = (),
    stopwords=None,
) -> FastAPI:
    app = FastAPI(title="ctxscope", docs_url=None, redoc_url=None)
    app.state.index = index if index is not None else (load(index_path) if index_path else None)
    app.state.index_path = str(index_path) if index_path else None
    app.state.stopwords = stopwords if stopwords is not None else load_stopwords()

    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    def current_index() -> SemanticIndex | None:
        return app.state.index

    @app.get("/healthz")
    def healthz():
        return PlainTextResponse("ok")

    @app.get("/meta")
    def meta():
        idx = current_index()
        if idx is None:
            return JSONResponse(status_code=503, content={"code": "INDEX_NOT_LOADED"})
        built = None
        if app.state.index_path and Path(app.state.index_path).exists():
            built = Path(app.state.index_path).stat().st_mtime
        return {
            "dims": idx.config.dims,
            "seed": idx.config.seed,
            "vocab_size": idx.config.vocab_size,
            "entity_count": len(idx),
            "counts": idx.counts_by_kind(),
            "background_sample_size": idx.background_sample_size,
            "defaults": {"k": DEFAULT_DISPLAY, "candidates": DEFAULT_CANDIDATES},
            "built": built,
        }

    @app.get("/relate")
    def relate_endpoint(request: Request):
        idx = current_index()
        if idx is None:
            return JSONResponse(status_code=503, content={"code": "INDEX_NOT_LOADED"})
        params = request.query_params
        raw = params.get("input", "")
        try:
            type_filter = parse_types(params.get("types"))
            k = int(params.get("k", DEFAULT_DISPLAY))
            candidates = int(params.get("candidates", max(DEFAULT_CANDIDATES, k)))
        except ValueError as exc:
            return _bad_request("BAD_PARAM", str(exc))
        if not 1 <= k <= MAX_K:
            return _bad_request("BAD_PARAM", f"k must be in [1, {MAX_K}]")
        if not k <= candidates <= MAX_CANDIDATES:
            return _bad_request("BAD_PARAM", f"candidates must be in [k, {MAX_CANDIDATES}]")

        t0 = time.perf_counter()
        try:
            network = pipeline.relate(
                idx,
                raw,
                stopwords=app.state.stopwords,
                type_filter=type_filter,
                k_display=k,
                k_candidates=candidates,
            )
        except EmptyQueryError as exc:
            return _bad_request("EMPTY_QUERY", str(exc), raw=exc.raw, unresolved=exc.unresolved)
        except NoSignalError as exc:
            return _bad_request("NO_SIGNAL", str(exc))
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        payload = pipeline.network_payload(network, elapsed_ms=round(elapsed_ms, 3))
        return Response(
            content=pipeline.payload_json(payload), media_type="application/json"
        )

    @app.get("/entity/{kind}/{key:path}")
    def entity_detail(kind: str, key: str):
        idx = current_index()
        if idx is None:
            return JSONResponse(status_code=503, content={"code": "INDEX_NOT_LOADED"})
        kind = kind.strip().lower()
        if kind not in _KIND_ALIASES:
            return JSONResponse(status_code=404, content={"code": "UNKNOWN_ENTITY"})
        entity = EntityId(_KIND_ALIASES[kind], normalize_name(key))
        try:
            row = idx.row_index(entity)
        except UnknownEntityError:
            return JSONResponse(status_code=404, content={"code": "UNKNOWN_ENTITY"})

        neighbors = []
        active = bool(idx.active[row])
        if active:
            hits = top_candidates(idx.unit_row(row), idx, None, k_candidates=11)
            neighbors = [
                {
                    "kind": h.entity.kind,
                    "key": h.entity.key,
                    "similarity": h.similarity,
                    "specificity": specificity_score(
                        h.similarity, float(idx.mu[h.row]), float(idx.sigma[h.row])
                    ),
                }
                for h in hits
                if h.row != row
            ][:10]
        return {
            "kind": entity.kind,
            "key": entity.key,
            "norm_active": active,
            "mu": float(idx.mu[row]),
            "sigma": float(idx.sigma[row]),
            "top_neighbors": neighbors,
        }

    if static_dir:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
