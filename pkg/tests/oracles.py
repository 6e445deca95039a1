"""Independent brute-force oracles and random-input generators.

Everything here evaluates queries by linear scans over raw records,
reimplementing the documented semantics without touching the engine's
indexes. Where the engine and an oracle must agree on float ties
(relevance means), both sum scores in clause-then-term order, which is a
documented contract of the result-ordering rules.
"""

from __future__ import annotations

import math
import random
from datetime import date, timedelta

from lifegrep.dsl import (
    KEYWORD_KIND,
    SCORED_KEYWORDS,
    FilterQuery,
    Keyword,
    QueryOptions,
    SortOrder,
    coordinate_of,
)
from lifegrep.model import Corpus, ImageRecord, Kind, NamedTimeTable

EARTH_RADIUS_KM = 6371.0


def haversine_oracle(lat1, lon1, lat2, lon2) -> float:
    """atan2 formulation, deliberately different from the engine's asin one."""
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = math.radians(lat2 - lat1)
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return EARTH_RADIUS_KM * 2 * math.atan2(math.sqrt(a), math.sqrt(1 - a))


def _in_window(window, minutes: int) -> bool:
    start, end = window
    if start == end:
        return False
    if start < end:
        return start <= minutes < end
    return minutes >= start or minutes < end


def _best_score(rec: ImageRecord, kind: Kind, term: str):
    best = None
    for det in rec.detections:
        if det.kind is kind and det.term == term:
            if best is None or det.score > best:
                best = det.score
    return best


def record_matches(
    rec: ImageRecord,
    q: FilterQuery,
    table: NamedTimeTable,
    coord_km: float,
) -> bool:
    for clause in q.clauses:
        kw = clause.keyword
        if kw in SCORED_KEYWORDS:
            kind = KEYWORD_KIND[kw]
            for term in clause.terms:
                threshold = term.min_score if term.min_score is not None else q.options.global_score
                best = _best_score(rec, kind, term.text)
                if best is None or best < threshold:
                    return False
        elif kw is Keyword.WEEKDAYS:
            if rec.weekday() not in {t.text for t in clause.terms}:
                return False
        elif kw is Keyword.DATE:
            if rec.local_date().isoformat() not in {t.text for t in clause.terms}:
                return False
        elif kw is Keyword.TIMENAME:
            minutes = rec.local_minutes()
            hit = False
            for term in clause.terms:
                window = table.window(term.text)
                if window is not None and _in_window(window, minutes):
                    hit = True
                    break
            if not hit:
                return False
        else:  # location
            hit = False
            for term in clause.terms:
                coord = coordinate_of(term.text)
                if coord is None:
                    if rec.named_location is not None and rec.named_location.lower() == term.text:
                        hit = True
                        break
                elif rec.geo is not None:
                    if haversine_oracle(coord[0], coord[1], rec.geo.lat, rec.geo.lon) <= coord_km:
                        hit = True
                        break
            if not hit:
                return False
    return True


def relevance_oracle(rec: ImageRecord, q: FilterQuery) -> float:
    scores = []
    for clause in q.clauses:
        if clause.keyword not in SCORED_KEYWORDS:
            continue
        kind = KEYWORD_KIND[clause.keyword]
        for term in clause.terms:
            scores.append(_best_score(rec, kind, term.text))
    if not scores:
        return 1.0
    return sum(scores) / len(scores)


def evaluate_oracle(
    corpus: Corpus,
    q: FilterQuery,
    table: NamedTimeTable,
    coord_km: float = 1.0,
) -> tuple[list[str], int]:
    """(ordered hit ids, total before limit) by pure linear scan."""
    hits = [
        (rec, relevance_oracle(rec, q))
        for rec in corpus
        if record_matches(rec, q, table, coord_km)
    ]
    if q.options.reduced:
        best_per_cluster: dict[int, tuple] = {}
        for rec, rel in hits:
            key = (-rel, rec.ts, rec.id)
            prev = best_per_cluster.get(rec.cluster_id)
            if prev is None or key < prev[0]:
                best_per_cluster[rec.cluster_id] = (key, rec, rel)
        hits = [(rec, rel) for _, rec, rel in best_per_cluster.values()]

    gs = q.options.global_score
    if q.options.sort is SortOrder.CONFIDENCE:
        key = lambda h: (-h[1], h[0].ts, h[0].id)
    elif q.options.sort is SortOrder.OBJECT_COUNT:
        def key(h):
            n = sum(1 for det in h[0].detections if det.kind is Kind.OBJECT and det.score >= gs)
            return (-n, h[0].ts, h[0].id)
    else:
        key = lambda h: (h[0].ts, h[0].id)
    hits.sort(key=key)
    total = len(hits)
    return [rec.id for rec, _ in hits[: q.options.limit]], total


def temporal_oracle(
    corpus: Corpus,
    stages_hits: list[list[ImageRecord]],
    max_span: timedelta | None,
    same_day: bool,
    limit: int,
) -> tuple[list[tuple[str, ...]], int]:
    """Exhaustive chain enumeration over per-stage hit lists.

    For each qualifying first element the reported chain minimizes
    (completion timestamp, then the (ts, id) sequence of later elements).
    Returns chains ordered by first element (ts, id) and the pre-limit count.
    """

    def extend(chain: list[ImageRecord], stage_i: int, out: list[tuple]):
        if stage_i == len(stages_hits):
            key = (chain[-1].ts, tuple((r.ts, r.id) for r in chain[1:]))
            out.append((key, tuple(r.id for r in chain)))
            return
        prev = chain[-1]
        for cand in stages_hits[stage_i]:
            if cand.ts <= prev.ts:
                continue
            if max_span is not None and cand.ts - prev.ts > max_span:
                continue
            if same_day and cand.local_date() != prev.local_date():
                continue
            extend(chain + [cand], stage_i + 1, out)

    firsts: list[tuple] = []
    for r1 in stages_hits[0]:
        complete: list[tuple] = []
        extend([r1], 1, complete)
        if complete:
            complete.sort(key=lambda item: item[0])
            firsts.append(((r1.ts, r1.id), complete[0][1]))
    firsts.sort(key=lambda item: item[0])
    total = len(firsts)
    return [chain for _, chain in firsts[:limit]], total


def cluster_oracle(
    records: list[ImageRecord], threshold: float, max_gap: timedelta
) -> list[int]:
    """Re-derive cluster ids from the full pairwise similarity of features."""

    def cos(a, b):
        dot = sum(x * y for x, y in zip(a, b))
        na = math.sqrt(sum(x * x for x in a))
        nb = math.sqrt(sum(y * y for y in b))
        return dot / (na * nb) if na and nb else 0.0

    sims: dict[tuple[int, int], float] = {}
    for i in range(len(records)):
        for j in range(i + 1, len(records)):
            a, b = records[i].feature, records[j].feature
            if a is not None and b is not None:
                sims[(i, j)] = cos(a, b)

    out: list[int] = []
    cid = 0
    for i, rec in enumerate(records):
        if i == 0:
            out.append(0)
            continue
        prev = records[i - 1]
        linked = (
            rec.feature is not None
            and prev.feature is not None
            and sims[(i - 1, i)] >= threshold
            and rec.ts - prev.ts <= max_gap
            and rec.local_date() == prev.local_date()
        )
        if not linked:
            cid += 1
        out.append(cid)
    return out


class HistoryModel:
    """Reference dedup-LRU replay model for the history store."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.items: list[dict] = []  # most recent first

    def record(self, entry_id: str, query) -> None:
        for i, item in enumerate(self.items):
            if item["id"] == entry_id:
                self.items.insert(0, self.items.pop(i))
                return
        self.items.insert(
            0,
            {
                "id": entry_id,
                "query": query,
                "first": None,
                "last": None,
                "longest": None,
                "longest_ms": 0,
            },
        )
        del self.items[self.capacity :]

    def view(self, entry_id: str, record_id: str, ms: int) -> bool:
        for item in self.items:
            if item["id"] == entry_id:
                if item["first"] is None:
                    item["first"] = record_id
                    item["longest"] = record_id
                    item["longest_ms"] = ms
                elif ms > item["longest_ms"]:
                    item["longest"] = record_id
                    item["longest_ms"] = ms
                item["last"] = record_id
                return True
        return False

    def clear(self) -> None:
        self.items = []


# -- random input generators -----------------------------------------------------

JUNK_TERMS = ("zeppelin", "quokka", "unseen_term", "xyzzy")


def _maybe_case(rnd: random.Random, text: str) -> str:
    roll = rnd.random()
    if roll < 0.15:
        return text.upper()
    if roll < 0.25:
        return "".join(ch.upper() if rnd.random() < 0.5 else ch for ch in text)
    return text


def _keyword_token(rnd: random.Random, kw: Keyword) -> str:
    return _maybe_case(rnd, kw.long if rnd.random() < 0.6 else kw.alias)


class QueryGenerator:
    """Random valid query strings drawn from a corpus's actual vocabulary."""

    def __init__(self, corpus: Corpus, table: NamedTimeTable, rnd: random.Random):
        self.rnd = rnd
        self.table = table
        self.terms: dict[Kind, list[str]] = {k: [] for k in Kind}
        seen = set()
        for rec in corpus:
            for det in rec.detections:
                if (det.kind, det.term) not in seen:
                    seen.add((det.kind, det.term))
                    self.terms[det.kind].append(det.term)
        self.locations = sorted({r.named_location.lower() for r in corpus if r.named_location})
        self.dates = sorted({r.local_date() for r in corpus})
        self.geo_points = [(r.geo.lat, r.geo.lon) for r in corpus if r.geo is not None]

    def _score_suffix(self) -> str:
        if self.rnd.random() < 0.6:
            return ""
        return f"({self.rnd.randint(1, 100) / 100:.2f})"  # two-decimal by contract

    def _scored_terms(self, kind: Kind) -> str:
        pool = self.terms[kind] or list(JUNK_TERMS)
        n = self.rnd.randint(1, 2)
        picks = []
        for _ in range(n):
            term = self.rnd.choice(pool) if self.rnd.random() < 0.9 else self.rnd.choice(JUNK_TERMS)
            picks.append(_maybe_case(self.rnd, term) + self._score_suffix())
        join = ", " if self.rnd.random() < 0.3 else ","
        return join.join(picks)

    def _clause(self, kw: Keyword) -> str:
        rnd = self.rnd
        if kw in SCORED_KEYWORDS:
            body = self._scored_terms(KEYWORD_KIND[kw])
        elif kw is Keyword.WEEKDAYS:
            names = rnd.sample(
                ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"],
                rnd.randint(1, 2),
            )
            body = ",".join(_maybe_case(rnd, n) for n in names)
        elif kw is Keyword.TIMENAME:
            pool = self.table.names() + ["brunchtime"]
            body = ",".join(_maybe_case(rnd, t) for t in rnd.sample(pool, rnd.randint(1, 2)))
        elif kw is Keyword.DATE:
            picks = []
            for _ in range(rnd.randint(1, 2)):
                if self.dates and rnd.random() < 0.85:
                    d = rnd.choice(self.dates)
                else:
                    d = date(2001, 1, 1) + timedelta(days=rnd.randint(0, 300))
                picks.append(d.strftime("%Y/%m/%d") if rnd.random() < 0.5 else d.isoformat())
            body = ",".join(picks)
        else:  # location
            picks = []
            for _ in range(rnd.randint(1, 2)):
                roll = rnd.random()
                if roll < 0.5 and self.locations:
                    picks.append(_maybe_case(rnd, rnd.choice(self.locations)))
                elif roll < 0.8 and self.geo_points:
                    lat, lon = rnd.choice(self.geo_points)
                    lat += rnd.uniform(-0.02, 0.02)
                    lon += rnd.uniform(-0.02, 0.02)
                    picks.append(f"{lat:.5f},{lon:.5f}")
                else:
                    picks.append("atlantis")
            body = ";".join(picks)
        return f"{_keyword_token(self.rnd, kw)} {body}"

    def query_string(self, max_clauses: int = 3) -> str:
        n = self.rnd.randint(0, max_clauses)
        kws = self.rnd.sample(list(Keyword), n) if n else []
        sep = "  " if self.rnd.random() < 0.2 else " "
        return sep.join(self._clause(kw) for kw in kws)

    def options(self, small_limits: bool = True) -> QueryOptions:
        rnd = self.rnd
        limit = rnd.choice([3, 10, 50, 1000]) if small_limits else 1000
        return QueryOptions(
            global_score=rnd.randint(0, 100) / 100,
            limit=limit,
            reduced=rnd.random() < 0.5,
            sort=rnd.choice(list(SortOrder)),
        )
