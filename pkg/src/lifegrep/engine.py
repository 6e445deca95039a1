"""Index building and query evaluation.

An IndexSet is an immutable bundle of inverted/positional structures over a
corpus; every operation here is a pure read, so one IndexSet can serve any
number of concurrent evaluations. Tie-breaking is a documented contract:
every sort uses timestamp ascending then record id ascending as the final
keys, which makes result ordering a total order and lets brute-force
oracles compare output exactly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from datetime import date as date_t
from datetime import datetime, timedelta
from typing import Optional, Sequence

from .cluster import cosine_similarity
from .dsl import (
    DEFAULT_GLOBAL_SCORE,
    KEYWORD_KIND,
    SCORED_KEYWORDS,
    Clause,
    FilterQuery,
    Keyword,
    SortOrder,
    coordinate_of,
)
from .geo import haversine_km
from .model import Corpus, CorpusError, GeoPoint, Kind, NamedTimeTable

DEFAULT_COORD_MATCH_KM = 1.0


@dataclass(frozen=True, slots=True)
class Hit:
    id: str
    score: float
    matched_terms: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class ResultPage:
    hits: tuple[Hit, ...]
    total_before_limit: int


@dataclass(frozen=True, slots=True)
class TemporalQuery:
    stages: tuple[FilterQuery, ...]
    max_span: Optional[timedelta] = None  # None: bounded by the same-day policy alone
    same_day: bool = True


@dataclass(frozen=True, slots=True)
class TemporalChain:
    ids: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class TemporalResult:
    chains: tuple[TemporalChain, ...]
    total_before_limit: int


@dataclass
class IndexSet:
    corpus: Corpus
    time_table: NamedTimeTable
    coord_match_km: float
    # (kind, term) -> one (ordinal, score) entry per detection, ordinal-sorted
    term_postings: dict[tuple[Kind, str], list[tuple[int, float]]]
    # (kind, term) -> ordinal -> best score (duplicate detections collapsed)
    term_best: dict[tuple[Kind, str], dict[int, float]]
    day_ranges: dict[date_t, tuple[int, int]]
    dates_sorted: list[date_t]
    weekday_dates: dict[str, set[date_t]]
    location_ordinals: dict[str, list[int]]
    geo_entries: list[tuple[int, float, float]]
    cluster_members: dict[int, list[int]]
    # per-ordinal views
    ids: list[str] = field(repr=False, default_factory=list)
    ts: list[datetime] = field(repr=False, default_factory=list)
    minutes: list[int] = field(repr=False, default_factory=list)
    dates: list[date_t] = field(repr=False, default_factory=list)
    object_scores: list[tuple[float, ...]] = field(repr=False, default_factory=list)

    def __len__(self) -> int:
        return len(self.corpus)


def build_indexes(
    corpus: Corpus,
    time_table: Optional[NamedTimeTable] = None,
    coord_match_km: float = DEFAULT_COORD_MATCH_KM,
) -> IndexSet:
    """Build all indexes in one deterministic pass over the sorted corpus."""
    postings: dict[tuple[Kind, str], list[tuple[int, float]]] = {}
    best: dict[tuple[Kind, str], dict[int, float]] = {}
    day_ranges: dict[date_t, tuple[int, int]] = {}
    weekday_dates: dict[str, set[date_t]] = {}
    location_ordinals: dict[str, list[int]] = {}
    geo_entries: list[tuple[int, float, float]] = []
    cluster_members: dict[int, list[int]] = {}
    ids, ts, minutes, dates, object_scores = [], [], [], [], []

    for o, rec in enumerate(corpus):
        ids.append(rec.id)
        ts.append(rec.ts)
        minutes.append(rec.local_minutes())
        d = rec.local_date()
        dates.append(d)
        if d in day_ranges:
            start, stop = day_ranges[d]
            if stop != o:
                raise CorpusError(
                    f"local date {d} is not contiguous in timestamp order "
                    "(mixed timezone offsets interleave local dates)"
                )
            day_ranges[d] = (start, o + 1)
        else:
            day_ranges[d] = (o, o + 1)
            weekday_dates.setdefault(rec.weekday(), set()).add(d)
        for det in rec.detections:
            key = (det.kind, det.term)
            postings.setdefault(key, []).append((o, det.score))
            per = best.setdefault(key, {})
            if det.score > per.get(o, -1.0):
                per[o] = det.score
        if rec.named_location is not None:
            location_ordinals.setdefault(rec.named_location.lower(), []).append(o)
        if rec.geo is not None:
            geo_entries.append((o, rec.geo.lat, rec.geo.lon))
        cluster_members.setdefault(rec.cluster_id, []).append(o)
        object_scores.append(tuple(det.score for det in rec.detections if det.kind is Kind.OBJECT))

    return IndexSet(
        corpus=corpus,
        time_table=time_table or NamedTimeTable(),
        coord_match_km=coord_match_km,
        term_postings=postings,
        term_best=best,
        day_ranges=day_ranges,
        dates_sorted=sorted(day_ranges),
        weekday_dates=weekday_dates,
        location_ordinals=location_ordinals,
        geo_entries=geo_entries,
        cluster_members=cluster_members,
        ids=ids,
        ts=ts,
        minutes=minutes,
        dates=dates,
        object_scores=object_scores,
    )


# -- filter evaluation ---------------------------------------------------------

def _dates_to_ordinals(idx: IndexSet, dates: Sequence[date_t]) -> set[int]:
    out: set[int] = set()
    for d in dates:
        rng = idx.day_ranges.get(d)
        if rng:
            out.update(range(rng[0], rng[1]))
    return out


def _clause_ordinals(clause: Clause, idx: IndexSet, global_score: float) -> set[int]:
    kw = clause.keyword
    if kw in SCORED_KEYWORDS:
        kind = KEYWORD_KIND[kw]
        result: Optional[set[int]] = None
        for term in clause.terms:
            threshold = term.min_score if term.min_score is not None else global_score
            per = idx.term_best.get((kind, term.text), {})
            matching = {o for o, s in per.items() if s >= threshold}
            result = matching if result is None else result & matching
            if not result:
                return set()
        return result if result is not None else set()

    if kw is Keyword.WEEKDAYS:
        dates: list[date_t] = []
        for term in clause.terms:
            dates.extend(idx.weekday_dates.get(term.text, ()))
        return _dates_to_ordinals(idx, dates)

    if kw is Keyword.DATE:
        return _dates_to_ordinals(idx, [date_t.fromisoformat(t.text) for t in clause.terms])

    if kw is Keyword.TIMENAME:
        names = [t.text for t in clause.terms]
        table = idx.time_table
        return {
            o
            for o, m in enumerate(idx.minutes)
            if any(table.contains(name, m) for name in names)
        }

    # location: named match OR coordinate proximity
    out: set[int] = set()
    for term in clause.terms:
        coord = coordinate_of(term.text)
        if coord is None:
            out.update(idx.location_ordinals.get(term.text, ()))
        else:
            lat, lon = coord
            for o, rlat, rlon in idx.geo_entries:
                if haversine_km(lat, lon, rlat, rlon) <= idx.coord_match_km:
                    out.add(o)
    return out


def _match_ordinals(q: FilterQuery, idx: IndexSet) -> set[int]:
    result: Optional[set[int]] = None
    for clause in q.clauses:
        matching = _clause_ordinals(clause, idx, q.options.global_score)
        result = matching if result is None else result & matching
        if not result:
            return set()
    return result if result is not None else set(range(len(idx)))


def _relevance(q: FilterQuery, ordinal: int, idx: IndexSet) -> tuple[float, tuple[str, ...]]:
    """Mean of best matched detection scores, in clause-then-term order.

    The iteration order is a contract: oracles must sum in the same order so
    Confidence-sort ties compare on identical floats.
    """
    scores: list[float] = []
    matched: list[str] = []
    for clause in q.clauses:
        if clause.keyword not in SCORED_KEYWORDS:
            continue
        kind = KEYWORD_KIND[clause.keyword]
        for term in clause.terms:
            scores.append(idx.term_best[(kind, term.text)][ordinal])
            matched.append(f"{kind.value}:{term.text}")
    if not scores:
        return 1.0, ()
    return sum(scores) / len(scores), tuple(matched)


def _reduce_hits(hits: list[tuple[int, float, tuple[str, ...]]], idx: IndexSet):
    """Keep the highest-relevance hit per cluster (ties: earliest, then id)."""
    best: dict[int, tuple] = {}
    for o, rel, matched in hits:
        cid = idx.corpus[o].cluster_id
        key = (-rel, idx.ts[o], idx.ids[o])
        if cid not in best or key < best[cid][0]:
            best[cid] = (key, o, rel, matched)
    return [(o, rel, matched) for _, o, rel, matched in best.values()]


def _sort_key(sort: SortOrder, idx: IndexSet, global_score: float):
    if sort is SortOrder.CONFIDENCE:
        return lambda h: (-h[1], idx.ts[h[0]], idx.ids[h[0]])
    if sort is SortOrder.OBJECT_COUNT:
        def object_count(o: int) -> int:
            return sum(1 for s in idx.object_scores[o] if s >= global_score)

        return lambda h: (-object_count(h[0]), idx.ts[h[0]], idx.ids[h[0]])
    return lambda h: (idx.ts[h[0]], idx.ids[h[0]])


def evaluate(q: FilterQuery, idx: IndexSet) -> ResultPage:
    """Evaluate a filter query: match, reduce, rank, truncate."""
    matched = _match_ordinals(q, idx)
    hits = [(o, *_relevance(q, o, idx)) for o in matched]
    if q.options.reduced:
        hits = _reduce_hits(hits, idx)
    hits.sort(key=_sort_key(q.options.sort, idx, q.options.global_score))
    total = len(hits)
    hits = hits[: q.options.limit]
    return ResultPage(
        hits=tuple(Hit(id=idx.ids[o], score=rel, matched_terms=m) for o, rel, m in hits),
        total_before_limit=total,
    )


# -- temporal chaining ---------------------------------------------------------

def _stage_ordinals(q: FilterQuery, idx: IndexSet) -> list[int]:
    """A stage's hit ordinals; reduced applies per stage, limit/sort do not."""
    matched = _match_ordinals(q, idx)
    if not q.options.reduced:
        return sorted(matched)
    hits = [(o, *_relevance(q, o, idx)) for o in matched]
    return sorted(o for o, _, _ in _reduce_hits(hits, idx))


def evaluate_temporal(tq: TemporalQuery, idx: IndexSet) -> TemporalResult:
    """All chains r1 < r2 < ... (strict by timestamp) with ri matching stage i.

    Each qualifying first element is reported once, paired with its
    earliest-completion chain: minimal final timestamp, then lexicographically
    earliest (timestamp, id) continuation. Consecutive elements respect
    max_span and, under the same-day policy, share a local calendar date.
    """
    if len(tq.stages) < 2:
        raise ValueError("temporal query needs at least 2 stages")

    stage_lists = [_stage_ordinals(s, idx) for s in tq.stages]
    if any(not lst for lst in stage_lists):
        return TemporalResult(chains=(), total_before_limit=0)

    # mc[o]: minimal completion timestamp from this stage onward; nxt[o]: chosen successor
    n_stages = len(stage_lists)
    mc: list[dict[int, datetime]] = [{} for _ in range(n_stages)]
    nxt: list[dict[int, int]] = [{} for _ in range(n_stages)]
    for o in stage_lists[-1]:
        mc[-1][o] = idx.ts[o]

    for i in range(n_stages - 2, -1, -1):
        succ = stage_lists[i + 1]
        succ_ts = [idx.ts[o] for o in succ]
        for o in stage_lists[i]:
            t0 = idx.ts[o]
            lo = bisect.bisect_right(succ_ts, t0)
            best_key = None
            best_c = None
            for j in range(lo, len(succ)):
                c = succ[j]
                if tq.max_span is not None and idx.ts[c] - t0 > tq.max_span:
                    break
                if tq.same_day and idx.dates[c] != idx.dates[o]:
                    if idx.dates[c] > idx.dates[o]:
                        break
                    continue
                comp = mc[i + 1].get(c)
                if comp is None:
                    continue
                key = (comp, idx.ts[c], idx.ids[c])
                if best_key is None or key < best_key:
                    best_key = key
                    best_c = c
            if best_c is not None:
                mc[i][o] = best_key[0]
                nxt[i][o] = best_c

    firsts = sorted(mc[0], key=lambda o: (idx.ts[o], idx.ids[o]))
    total = len(firsts)
    limit = tq.stages[-1].options.limit
    chains = []
    for o in firsts[:limit]:
        chain = [o]
        for i in range(n_stages - 1):
            chain.append(nxt[i][chain[-1]])
        chains.append(TemporalChain(ids=tuple(idx.ids[c] for c in chain)))
    return TemporalResult(chains=tuple(chains), total_before_limit=total)


# -- geo and similarity --------------------------------------------------------

def radius_search(
    center: GeoPoint, radius_km: float, idx: IndexSet, limit: Optional[int] = None
) -> ResultPage:
    """Records within radius_km of center, nearest first. Hit.score carries
    the distance in km. Records without coordinates never match."""
    if radius_km <= 0:
        raise ValueError(f"radius_km must be positive, got {radius_km}")
    found = []
    for o, lat, lon in idx.geo_entries:
        dist = haversine_km(center.lat, center.lon, lat, lon)
        if dist <= radius_km:
            found.append((dist, idx.ts[o], idx.ids[o]))
    found.sort()
    total = len(found)
    if limit is not None:
        found = found[:limit]
    return ResultPage(
        hits=tuple(Hit(id=rid, score=dist) for dist, _, rid in found),
        total_before_limit=total,
    )


def neighbors(record_id: str, k: int, idx: IndexSet) -> list[tuple[str, float]]:
    """Top-k most similar records by feature cosine, excluding the query
    record; ties broken by ascending record id. Empty when the record has
    no feature vector."""
    if k < 0:
        raise ValueError("k must be >= 0")
    rec = idx.corpus.get(record_id)
    if rec.feature is None or k == 0:
        return []
    scored = []
    for other in idx.corpus:
        if other.id == record_id or other.feature is None:
            continue
        scored.append((-cosine_similarity(rec.feature, other.feature), other.id))
    scored.sort()
    return [(rid, -neg) for neg, rid in scored[:k]]


# -- follow-up link queries ----------------------------------------------------

NEIGHBOR_LINK_COUNT = 5


def link_queries(record_id: str, idx: IndexSet) -> dict[str, str]:
    """Ready-to-issue follow-up queries for a record; every value re-parses."""
    rec = idx.corpus.get(record_id)
    links: dict[str, str] = {}
    links["same-day"] = "--date " + rec.local_date().strftime("%Y/%m/%d")

    object_terms: list[str] = []
    for det in rec.detections:
        if det.kind is Kind.OBJECT and det.term not in object_terms:
            best = idx.term_best[(Kind.OBJECT, det.term)][idx.corpus.ordinal_of(record_id)]
            if best >= DEFAULT_GLOBAL_SCORE:
                object_terms.append(det.term)
    if object_terms:
        links["same-objects"] = "-o " + ",".join(object_terms)

    similar = neighbors(record_id, NEIGHBOR_LINK_COUNT, idx)
    if similar:
        days = sorted({idx.corpus.get(rid).local_date() for rid, _ in similar})
        links["dates-of-similar"] = "--date " + ",".join(d.strftime("%Y/%m/%d") for d in days)
    return links
