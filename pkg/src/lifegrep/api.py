"""HTTP/JSON service over one ingested corpus.

All endpoints are documented in docs/api.md; that file is the shared
contract between this service, the CLI and the web client. Query parse
errors surface as 400 with the parser's positioned message, unknown ids
as 404; neither ever becomes a 500. The corpus and its IndexSet are loaded
once at startup and never mutated, so request handling is freely
concurrent; per-session history stores serialize their own mutations.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import asdict
from datetime import timedelta
from typing import Optional

from fastapi import FastAPI, Header, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import engine, explore
from .config import ApiConfig
from .dsl import (
    QueryOptions,
    QueryParseError,
    SortOrder,
    canonicalize,
    canonicalize_stages,
    parse,
)
from .engine import IndexSet, TemporalQuery
from .history import HistoryStore, UnknownEntryError
from .ingest import ingest_corpus
from .model import (
    DEFAULT_TIMENAMES,
    Corpus,
    GeoPoint,
    ImageRecord,
    NamedTimeTable,
    UnknownRecordError,
    format_rfc3339,
)
from .submit import submit

DEFAULT_SESSION = "default"


def _error_body(message: str, position: Optional[int] = None) -> dict:
    return {"error": {"message": message, "position": position}}


def _record_json(rec: ImageRecord, cluster_size: int) -> dict:
    return {
        "id": rec.id,
        "ts": format_rfc3339(rec.ts),
        "date": rec.local_date().isoformat(),
        "weekday": rec.weekday(),
        "lat": rec.geo.lat if rec.geo else None,
        "lon": rec.geo.lon if rec.geo else None,
        "loc": rec.named_location,
        "cluster_id": rec.cluster_id,
        "cluster_size": cluster_size,
        "detections": [
            {
                "kind": det.kind.value,
                "term": det.term,
                "score": det.score,
                "bbox": [det.bbox.x, det.bbox.y, det.bbox.w, det.bbox.h] if det.bbox else None,
            }
            for det in rec.detections
        ],
    }


def _hit_json(hit: engine.Hit, corpus: Corpus) -> dict:
    rec = corpus.get(hit.id)
    return {
        "id": hit.id,
        "ts": format_rfc3339(rec.ts),
        "score": hit.score,
        "matched_terms": list(hit.matched_terms),
        "cluster_id": rec.cluster_id,
        "loc": rec.named_location,
    }


def _options_from_params(
    config: ApiConfig,
    score: Optional[float],
    limit: Optional[int],
    reduced: Optional[bool],
    sort: Optional[str],
) -> QueryOptions:
    return QueryOptions(
        global_score=score if score is not None else config.score,
        limit=limit if limit is not None else config.limit,
        reduced=reduced if reduced is not None else config.reduced,
        sort=SortOrder(sort.lower()) if sort is not None else SortOrder(config.sort),
    )


def create_app(config: ApiConfig, corpus: Optional[Corpus] = None) -> FastAPI:
    """Build the service; ingests the configured corpus unless one is given."""
    if corpus is None:
        corpus = ingest_corpus(config.require_corpus())
    # config windows override/extend the defaults rather than replacing the table
    table = NamedTimeTable({**DEFAULT_TIMENAMES, **config.timenames})
    idx = engine.build_indexes(corpus, time_table=table, coord_match_km=config.coord_match_km)

    app = FastAPI(title="lifegrep", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.config = config
    app.state.idx = idx
    app.state.histories = {}
    app.state.histories_lock = threading.Lock()

    def store_for(session: str) -> HistoryStore:
        with app.state.histories_lock:
            store = app.state.histories.get(session)
            if store is None:
                store = HistoryStore(capacity=config.history_capacity)
                app.state.histories[session] = store
            return store

    @app.exception_handler(QueryParseError)
    async def on_parse_error(request: Request, exc: QueryParseError):
        return JSONResponse(_error_body(exc.args[0], exc.position), status_code=400)

    @app.exception_handler(UnknownRecordError)
    async def on_unknown_record(request: Request, exc: UnknownRecordError):
        return JSONResponse(_error_body(str(exc)), status_code=404)

    @app.exception_handler(UnknownEntryError)
    async def on_unknown_entry(request: Request, exc: UnknownEntryError):
        return JSONResponse(_error_body(str(exc)), status_code=404)

    @app.exception_handler(ValueError)
    async def on_value_error(request: Request, exc: ValueError):
        return JSONResponse(_error_body(str(exc)), status_code=400)

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(_error_body(str(exc.errors())), status_code=400)

    @app.get("/api/meta")
    def meta():
        dates = idx.dates_sorted
        return {
            "records": len(corpus),
            "first_date": dates[0].isoformat() if dates else None,
            "last_date": dates[-1].isoformat() if dates else None,
            "feature_dim": corpus.feature_dim,
            "timenames": {n: idx.time_table.window_label(n) for n in idx.time_table.names()},
            "defaults": {
                "score": config.score,
                "limit": config.limit,
                "reduced": config.reduced,
                "sort": config.sort,
            },
        }

    @app.get("/api/search")
    def search(
        q: str = "",
        score: Optional[float] = None,
        limit: Optional[int] = None,
        reduced: Optional[bool] = None,
        sort: Optional[str] = None,
    ):
        options = _options_from_params(config, score, limit, reduced, sort)
        query = parse(q, options=options)
        page = engine.evaluate(query, idx)
        canon = canonicalize(query)
        return {
            "canonical": {"text": canon.text, "digest": canon.digest},
            "options": {
                "score": options.global_score,
                "limit": options.limit,
                "reduced": options.reduced,
                "sort": options.sort.value,
            },
            "total": page.total_before_limit,
            "hits": [_hit_json(h, corpus) for h in page.hits],
        }

    @app.post("/api/search/temporal")
    def search_temporal(body: dict):
        stages_raw = body.get("stages")
        if not isinstance(stages_raw, list) or len(stages_raw) < 2:
            raise ValueError("temporal search needs a 'stages' array with at least 2 queries")
        options = _options_from_params(
            config, body.get("score"), body.get("limit"), body.get("reduced"), body.get("sort")
        )
        stages = tuple(parse(str(s), options=options) for s in stages_raw)
        max_span_s = body.get("max_span_s")
        same_day = bool(body.get("same_day", True))
        tq = TemporalQuery(
            stages=stages,
            max_span=timedelta(seconds=float(max_span_s)) if max_span_s is not None else None,
            same_day=same_day,
        )
        result = engine.evaluate_temporal(tq, idx)
        canon = canonicalize_stages(stages, max_span_s, same_day)
        return {
            "canonical": {"text": canon.text, "digest": canon.digest},
            "stages": [canonicalize(s).text for s in stages],
            "total": result.total_before_limit,
            "chains": [
                {
                    "ids": list(chain.ids),
                    "ts": [format_rfc3339(corpus.get(rid).ts) for rid in chain.ids],
                }
                for chain in result.chains
            ],
        }

    @app.get("/api/summaries")
    def summaries(
        page: int = 0,
        page_size: int = 10,
        weekday: Optional[str] = None,
        sort: Optional[str] = None,
        images_per_day: int = explore.DEFAULT_REPRESENTATIVES,
        top_k: int = explore.DEFAULT_TOP_K,
    ):
        weekday_filter = None
        if weekday:
            weekday_filter = {w.strip().lower() for w in weekday.split(",") if w.strip()}
        sort_term = None
        if sort and sort != "date":
            parts = sort.split(":", 2)
            if len(parts) != 3 or parts[0] != "term":
                raise ValueError(f"sort must be 'date' or 'term:<kind>:<term>', got {sort!r}")
            sort_term = (parts[1], parts[2])
        result = explore.day_summaries(
            idx,
            page=page,
            page_size=page_size,
            weekday_filter=weekday_filter,
            sort_term=sort_term,
            images_per_day=images_per_day,
            top_k=top_k,
        )
        return {
            "total": result.total,
            "page": result.page,
            "page_size": result.page_size,
            "days": [
                {
                    "date": s.date.isoformat(),
                    "weekday": s.weekday,
                    "image_count": s.image_count,
                    "representatives": list(s.representatives),
                    "top_locations": [[t, c] for t, c in s.top_locations],
                    "top_concepts": [[t, c] for t, c in s.top_concepts],
                    "top_objects": [[t, c] for t, c in s.top_objects],
                }
                for s in result.days
            ],
        }

    @app.get("/api/autocomplete")
    def autocomplete(fragment: str = "", kind: Optional[str] = None, max: int = 10):
        result = explore.autocomplete(idx, fragment, kind_filter=kind, max_results=max)
        if result.keywords:
            return {
                "keywords": [
                    {"long": k.long, "alias": k.alias, "domain": k.domain} for k in result.keywords
                ]
            }
        return {
            "suggestions": [
                {
                    "kind": s.kind,
                    "term": s.term,
                    "count": s.count,
                    "examples": list(s.examples),
                    "window": s.window,
                }
                for s in result.suggestions
            ]
        }

    @app.get("/api/image/{record_id}")
    def image_detail(record_id: str):
        rec = corpus.get(record_id)
        cluster_size = len(idx.cluster_members.get(rec.cluster_id, []))
        sims = engine.neighbors(record_id, 8, idx)
        return {
            "record": _record_json(rec, cluster_size),
            "neighbors": [{"id": rid, "similarity": sim} for rid, sim in sims],
            "links": engine.link_queries(record_id, idx),
        }

    @app.get("/api/geo")
    def geo(center_lat: float, center_lon: float, radius_km: float, limit: Optional[int] = None):
        center = GeoPoint(center_lat, center_lon)
        center.validate()
        page = engine.radius_search(center, radius_km, idx, limit=limit)
        return {
            "total": page.total_before_limit,
            "hits": [
                {
                    "id": h.id,
                    "ts": format_rfc3339(corpus.get(h.id).ts),
                    "distance_km": h.score,
                }
                for h in page.hits
            ],
        }

    @app.post("/api/submit")
    def submit_image(body: dict):
        record_id = body.get("id")
        if not isinstance(record_id, str) or not record_id:
            raise ValueError("submission body needs an 'id' string")
        receipt = submit(record_id, corpus, config.submit_url)
        return {
            "id": receipt.record_id,
            "submitted_at": receipt.submitted_at,
            "outcome": receipt.outcome.value,
        }

    @app.get("/api/history")
    def history_list(x_session_id: str = Header(default=DEFAULT_SESSION)):
        return {"entries": store_for(x_session_id).export()}

    @app.post("/api/history")
    def history_post(body: dict, x_session_id: str = Header(default=DEFAULT_SESSION)):
        store = store_for(x_session_id)
        if "view" in body:
            view = body["view"]
            entry = store.view_event(
                str(view.get("entry_id")), str(view.get("record_id")), int(view.get("view_ms", 0))
            )
        elif "stages" in body:
            stages = [parse(str(s)) for s in body["stages"]]
            canon = canonicalize_stages(stages, body.get("max_span_s"), bool(body.get("same_day", True)))
            entry = store.record(canon.digest, [canonicalize(s).text for s in stages])
        elif "query" in body:
            options = _options_from_params(
                config, body.get("score"), body.get("limit"), body.get("reduced"), body.get("sort")
            )
            canon = canonicalize(parse(str(body["query"]), options=options))
            entry = store.record(canon.digest, canon.text)
        else:
            raise ValueError("history POST needs 'query', 'stages' or 'view'")
        return {"entry": asdict(entry)}

    @app.delete("/api/history")
    def history_clear(x_session_id: str = Header(default=DEFAULT_SESSION)):
        store_for(x_session_id).clear()
        return {"cleared": True}

    @app.get("/api/thumb/{record_id}")
    def thumb(record_id: str):
        rec = corpus.get(record_id)
        label = rec.detections[0].term if rec.detections else rec.id
        hue = int(hashlib.sha256(rec.id.encode()).hexdigest()[:4], 16) % 360
        svg = (
            '<svg xmlns="http://www.w3.org/2000/svg" width="160" height="120">'
            f'<rect width="160" height="120" fill="hsl({hue},45%,38%)"/>'
            f'<text x="8" y="20" font-size="11" fill="#fff" font-family="monospace">{rec.id}</text>'
            f'<text x="8" y="108" font-size="12" fill="#fff" font-family="monospace">{label}</text>'
            "</svg>"
        )
        return Response(content=svg, media_type="image/svg+xml")

    if config.images_dir:
        app.mount("/images", StaticFiles(directory=config.images_dir), name="images")
    if config.static_dir:
        app.mount("/ui", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def serve(config: ApiConfig) -> None:
    """Run the service (blocking)."""
    import uvicorn

    host, port = config.host_port()
    app = create_app(config)
    uvicorn.run(app, host=host, port=port, log_level="info")
