"""Exploration services: day summaries and autocomplete suggestions.

Both are pure reads over an IndexSet. Day summaries aggregate each calendar
date into representative images (one per near-duplicate cluster) and most
frequent locations/concepts/objects; autocomplete does case-insensitive
substring matching over the corpus vocabulary with detection counts and
example images, plus the keyword listing for "-"/"--" and named-time
window info.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from datetime import date as date_t
from typing import Optional

from .dsl import KeywordInfo, list_keywords
from .engine import IndexSet
from .model import WEEKDAY_NAMES, Kind

DEFAULT_TOP_K = 5
DEFAULT_REPRESENTATIVES = 8

SUGGESTION_KINDS = ("concept", "object", "attribute", "location", "timename")


@dataclass(frozen=True, slots=True)
class DaySummary:
    date: date_t
    weekday: str
    image_count: int
    representatives: tuple[str, ...]
    top_locations: tuple[tuple[str, int], ...]
    top_concepts: tuple[tuple[str, int], ...]
    top_objects: tuple[tuple[str, int], ...]


@dataclass(frozen=True, slots=True)
class SummaryPage:
    days: tuple[DaySummary, ...]
    total: int
    page: int
    page_size: int


def _count_in_range(sorted_ordinals: list[int], start: int, stop: int) -> int:
    return bisect_left(sorted_ordinals, stop) - bisect_left(sorted_ordinals, start)


def _day_term_count(idx: IndexSet, kind: str, term: str, day: date_t) -> int:
    start, stop = idx.day_ranges[day]
    if kind == "location":
        ordinals = idx.location_ordinals.get(term, [])
        return _count_in_range(ordinals, start, stop)
    postings = idx.term_postings.get((Kind(kind), term), [])
    lo = bisect_left(postings, (start, float("-inf")))
    hi = bisect_left(postings, (stop, float("-inf")))
    return hi - lo


def _top_terms(counts: dict[str, int], k: int) -> tuple[tuple[str, int], ...]:
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return tuple(ranked[:k])


def _summarize_day(idx: IndexSet, day: date_t, images_per_day: int, top_k: int) -> DaySummary:
    start, stop = idx.day_ranges[day]
    reps: list[str] = []
    seen_clusters: set[int] = set()
    concept_counts: dict[str, int] = {}
    object_counts: dict[str, int] = {}
    location_counts: dict[str, int] = {}
    for o in range(start, stop):
        rec = idx.corpus[o]
        if rec.cluster_id not in seen_clusters and len(reps) < images_per_day:
            seen_clusters.add(rec.cluster_id)
            reps.append(rec.id)
        for det in rec.detections:
            if det.kind is Kind.CONCEPT:
                concept_counts[det.term] = concept_counts.get(det.term, 0) + 1
            elif det.kind is Kind.OBJECT:
                object_counts[det.term] = object_counts.get(det.term, 0) + 1
        if rec.named_location is not None:
            name = rec.named_location.lower()
            location_counts[name] = location_counts.get(name, 0) + 1
    return DaySummary(
        date=day,
        weekday=WEEKDAY_NAMES[day.weekday()],
        image_count=stop - start,
        representatives=tuple(reps),
        top_locations=_top_terms(location_counts, top_k),
        top_concepts=_top_terms(concept_counts, top_k),
        top_objects=_top_terms(object_counts, top_k),
    )


def day_summaries(
    idx: IndexSet,
    page: int = 0,
    page_size: int = 10,
    weekday_filter: Optional[set[str]] = None,
    sort_term: Optional[tuple[str, str]] = None,
    images_per_day: int = DEFAULT_REPRESENTATIVES,
    top_k: int = DEFAULT_TOP_K,
) -> SummaryPage:
    """Filtered, sorted, paginated day summaries.

    ``sort_term=(kind, term)`` orders days by that term's detection count
    (record count for kind "location") descending, ties by date ascending;
    otherwise days run in date order. A page beyond the range is an empty
    page, not an error.
    """
    if page < 0:
        raise ValueError("page must be >= 0")
    if page_size < 1:
        raise ValueError("page_size must be >= 1")
    if images_per_day < 1:
        raise ValueError("images_per_day must be >= 1")

    days = idx.dates_sorted
    if weekday_filter is not None:
        wanted = {w.lower() for w in weekday_filter}
        unknown = wanted - set(WEEKDAY_NAMES)
        if unknown:
            raise ValueError(f"unknown weekday names: {sorted(unknown)}")
        days = [d for d in days if WEEKDAY_NAMES[d.weekday()] in wanted]

    if sort_term is not None:
        kind, term = sort_term[0].lower(), sort_term[1].lower()
        if kind not in ("concept", "object", "attribute", "location"):
            raise ValueError(f"unknown sort kind {kind!r}")
        days = sorted(days, key=lambda d: (-_day_term_count(idx, kind, term, d), d))

    total = len(days)
    window = days[page * page_size : (page + 1) * page_size]
    summaries = tuple(_summarize_day(idx, d, images_per_day, top_k) for d in window)
    return SummaryPage(days=summaries, total=total, page=page, page_size=page_size)


# -- autocomplete ---------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Suggestion:
    kind: str
    term: str
    count: int
    examples: tuple[str, ...] = ()
    window: Optional[str] = None  # "HH:MM-HH:MM", timename suggestions only


@dataclass(frozen=True, slots=True)
class AutocompleteResult:
    keywords: tuple[KeywordInfo, ...] = ()
    suggestions: tuple[Suggestion, ...] = ()


def _examples_from_postings(idx: IndexSet, postings: list[tuple[int, float]]) -> tuple[str, ...]:
    ids: list[str] = []
    for o, _ in postings:
        rid = idx.ids[o]
        if rid not in ids:
            ids.append(rid)
        if len(ids) == 3:
            break
    return tuple(ids)


def autocomplete(
    idx: IndexSet,
    fragment: str,
    kind_filter: Optional[str] = None,
    max_results: int = 10,
) -> AutocompleteResult:
    """Suggestions whose term contains ``fragment`` (case-insensitive).

    "-" or "--" instead lists the query keywords and aliases. Results are
    ordered by count descending, then term, then kind; zero-count entries
    are never emitted.
    """
    if max_results < 1:
        raise ValueError("max_results must be >= 1")
    stripped = fragment.strip()
    if stripped in ("-", "--"):
        return AutocompleteResult(keywords=tuple(list_keywords()))
    if kind_filter is not None:
        kind_filter = kind_filter.lower()
        if kind_filter not in SUGGESTION_KINDS:
            raise ValueError(f"unknown suggestion kind {kind_filter!r}")

    frag = stripped.lower()
    found: list[Suggestion] = []

    if kind_filter in (None, "concept", "object", "attribute"):
        for (kind, term), postings in idx.term_postings.items():
            if kind_filter is not None and kind.value != kind_filter:
                continue
            if frag in term:
                found.append(
                    Suggestion(
                        kind=kind.value,
                        term=term,
                        count=len(postings),
                        examples=_examples_from_postings(idx, postings),
                    )
                )

    if kind_filter in (None, "location"):
        for name, ordinals in idx.location_ordinals.items():
            if frag in name:
                examples = tuple(idx.ids[o] for o in ordinals[:3])
                found.append(Suggestion(kind="location", term=name, count=len(ordinals), examples=examples))

    if kind_filter in (None, "timename"):
        table = idx.time_table
        for name in table.names():
            if frag not in name:
                continue
            matching = [o for o, m in enumerate(idx.minutes) if table.contains(name, m)]
            if not matching:
                continue
            found.append(
                Suggestion(
                    kind="timename",
                    term=name,
                    count=len(matching),
                    examples=tuple(idx.ids[o] for o in matching[:3]),
                    window=table.window_label(name),
                )
            )

    found.sort(key=lambda s: (-s.count, s.term, s.kind))
    return AutocompleteResult(suggestions=tuple(found[:max_results]))
