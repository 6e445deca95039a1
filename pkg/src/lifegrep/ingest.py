"""JSON-lines metadata ingestion.

One record per line with keys: id, ts (RFC-3339 with offset), lat, lon,
loc, detections ([{kind, term, score, bbox}]), feat (unit-norm vector).
Optional keys are simply omitted. All validation errors carry the line
number and the offending field. The returned corpus is timestamp-sorted
(stable, so equal timestamps keep file order) with cluster ids assigned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import timedelta
from pathlib import Path
from typing import Optional

from .cluster import DEFAULT_MAX_GAP, DEFAULT_SIMILARITY_THRESHOLD, assign_clusters
from .model import (
    BBox,
    Corpus,
    CorpusError,
    Detection,
    GeoPoint,
    ImageRecord,
    Kind,
    parse_rfc3339,
    validate_feature,
)

_KINDS = {k.value: k for k in Kind}

# Terms and named locations must stay expressible in the query language:
# the DSL reserves separators/parens, and a leading '-' would lex as a keyword.
_RESERVED_CHARS = set(",;()")


def _check_queryable(text: str, line: int, fieldname: str) -> None:
    if text.startswith("-"):
        raise CorpusError(f"{text!r} must not start with '-'", line, fieldname)
    bad = _RESERVED_CHARS.intersection(text)
    if bad:
        raise CorpusError(
            f"{text!r} contains reserved query characters {sorted(bad)}", line, fieldname
        )


@dataclass(frozen=True)
class IngestConfig:
    similarity_threshold: float = DEFAULT_SIMILARITY_THRESHOLD
    max_gap: timedelta = DEFAULT_MAX_GAP


def _require_number(value, line: int, fieldname: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CorpusError(f"expected a number, got {value!r}", line, fieldname)
    return float(value)


def _parse_detection(obj, line: int) -> Detection:
    if not isinstance(obj, dict):
        raise CorpusError(f"detection must be an object, got {obj!r}", line, "detections")
    kind_raw = obj.get("kind")
    kind = _KINDS.get(str(kind_raw).lower()) if kind_raw is not None else None
    if kind is None:
        raise CorpusError(f"unknown detection kind {kind_raw!r}", line, "detections.kind")
    term = obj.get("term")
    if not isinstance(term, str) or not term.strip():
        raise CorpusError(f"missing or empty term in {obj!r}", line, "detections.term")
    score = _require_number(obj.get("score"), line, "detections.score")
    bbox = None
    if obj.get("bbox") is not None:
        raw = obj["bbox"]
        if not isinstance(raw, (list, tuple)) or len(raw) != 4:
            raise CorpusError(f"bbox must be [x, y, w, h], got {raw!r}", line, "detections.bbox")
        x, y, w, h = (_require_number(v, line, "detections.bbox") for v in raw)
        bbox = BBox(x, y, w, h)
    normalized = " ".join(term.split()).lower()
    _check_queryable(normalized, line, "detections.term")
    det = Detection(kind=kind, term=normalized, score=score, bbox=bbox)
    det.validate(line)
    return det


def _parse_line(raw: str, line: int) -> ImageRecord:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"invalid JSON ({exc.msg})", line) from None
    if not isinstance(obj, dict):
        raise CorpusError("record must be a JSON object", line)

    rec_id = obj.get("id")
    if not isinstance(rec_id, str) or not rec_id:
        raise CorpusError("missing or empty id", line, "id")
    ts_raw = obj.get("ts")
    if not isinstance(ts_raw, str):
        raise CorpusError("missing timestamp", line, "ts")
    try:
        ts = parse_rfc3339(ts_raw)
    except ValueError as exc:
        raise CorpusError(str(exc), line, "ts") from None

    geo: Optional[GeoPoint] = None
    has_lat, has_lon = obj.get("lat") is not None, obj.get("lon") is not None
    if has_lat != has_lon:
        raise CorpusError("lat and lon must be present together", line, "lat" if has_lat else "lon")
    if has_lat:
        geo = GeoPoint(_require_number(obj["lat"], line, "lat"), _require_number(obj["lon"], line, "lon"))
        geo.validate(line)

    loc = obj.get("loc")
    if loc is not None:
        if not isinstance(loc, str) or not loc.strip():
            raise CorpusError(f"named location must be a non-empty string, got {loc!r}", line, "loc")
        loc = " ".join(loc.split())
        _check_queryable(loc.lower(), line, "loc")

    raw_dets = obj.get("detections", [])
    if not isinstance(raw_dets, list):
        raise CorpusError("detections must be an array", line, "detections")
    detections = tuple(_parse_detection(d, line) for d in raw_dets)

    feature = None
    if obj.get("feat") is not None:
        raw_feat = obj["feat"]
        if not isinstance(raw_feat, list):
            raise CorpusError("feat must be an array of numbers", line, "feat")
        feature = tuple(_require_number(v, line, "feat") for v in raw_feat)
        validate_feature(feature, line)

    return ImageRecord(
        id=rec_id,
        ts=ts,
        geo=geo,
        named_location=loc,
        detections=detections,
        feature=feature,
    )


def ingest_corpus(path: str | Path, config: Optional[IngestConfig] = None) -> Corpus:
    """Load, validate, sort and cluster a metadata file into a corpus."""
    cfg = config or IngestConfig()
    records: list[ImageRecord] = []
    lines_of: dict[str, int] = {}
    feature_dim: Optional[int] = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            rec = _parse_line(raw, line_no)
            if rec.id in lines_of:
                raise CorpusError(
                    f"duplicate id {rec.id!r} (first seen on line {lines_of[rec.id]})", line_no, "id"
                )
            lines_of[rec.id] = line_no
            if rec.feature is not None:
                if feature_dim is None:
                    feature_dim = len(rec.feature)
                elif len(rec.feature) != feature_dim:
                    raise CorpusError(
                        f"feature dimension {len(rec.feature)} differs from corpus dimension {feature_dim}",
                        line_no,
                        "feat",
                    )
            records.append(rec)

    records.sort(key=lambda r: r.ts)  # stable: equal timestamps keep file order
    clusters = assign_clusters(records, cfg.similarity_threshold, cfg.max_gap)
    final = tuple(replace(rec, cluster_id=cid) for rec, cid in zip(records, clusters))
    return Corpus(records=final, feature_dim=feature_dim)
