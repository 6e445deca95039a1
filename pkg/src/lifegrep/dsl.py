"""The combinable-filter query language.

A query is a sequence of keyword groups, each holding a comma-separated
term list, in the style of command-line arguments:

    --concepts hotel/outdoor --objects car,person(0.9) --weekdays monday

Concepts/objects/attributes AND their terms together and accept per-term
``(score)`` confidence suffixes; weekdays/timename/location/date OR their
terms. ``--location`` uses ``;`` between terms so ``lat,lon`` coordinate
pairs stay unambiguous. Parsing is total: any input yields either a
FilterQuery or a QueryParseError with a character position.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from typing import Optional, Sequence

from .model import Kind, WEEKDAY_NAMES


class Keyword(str, Enum):
    CONCEPTS = "concepts"
    OBJECTS = "objects"
    ATTRIBUTES = "attributes"
    WEEKDAYS = "weekdays"
    TIMENAME = "timename"
    LOCATION = "location"
    DATE = "date"

    @property
    def long(self) -> str:
        return "--" + self.value

    @property
    def alias(self) -> str:
        return "-" + self.value[0]


#: Keywords whose terms AND together and may carry per-term confidence scores.
SCORED_KEYWORDS = frozenset({Keyword.CONCEPTS, Keyword.OBJECTS, Keyword.ATTRIBUTES})

KEYWORD_KIND: dict[Keyword, Kind] = {
    Keyword.CONCEPTS: Kind.CONCEPT,
    Keyword.OBJECTS: Kind.OBJECT,
    Keyword.ATTRIBUTES: Kind.ATTRIBUTE,
}

_KEYWORD_DOMAINS: dict[Keyword, str] = {
    Keyword.CONCEPTS: "scored concept terms, ANDed, e.g. hotel/outdoor(0.8)",
    Keyword.OBJECTS: "scored object terms, ANDed, e.g. car,person(0.9)",
    Keyword.ATTRIBUTES: "scored attribute terms, ANDed, e.g. indoor,wet",
    Keyword.WEEKDAYS: "weekday names, ORed, e.g. saturday,sunday",
    Keyword.TIMENAME: "named time-of-day windows, ORed, e.g. morning,afternoon",
    Keyword.LOCATION: "named locations or lat,lon pairs separated by ';', ORed",
    Keyword.DATE: "dates yyyy/mm/dd or yyyy-mm-dd, ORed",
}

_BY_LONG = {kw.value: kw for kw in Keyword}
_BY_ALIAS = {kw.value[0]: kw for kw in Keyword}


class SortOrder(str, Enum):
    DATE = "date"
    CONFIDENCE = "confidence"
    OBJECT_COUNT = "objects"


DEFAULT_GLOBAL_SCORE = 0.10
DEFAULT_LIMIT = 1000


@dataclass(frozen=True, slots=True)
class QueryOptions:
    global_score: float = DEFAULT_GLOBAL_SCORE
    limit: int = DEFAULT_LIMIT
    reduced: bool = False
    sort: SortOrder = SortOrder.DATE

    def __post_init__(self) -> None:
        if not (0.0 <= self.global_score <= 1.0):
            raise ValueError(f"global score {self.global_score} outside [0, 1]")
        if self.limit < 1:
            raise ValueError(f"limit must be positive, got {self.limit}")
        if not isinstance(self.sort, SortOrder):
            object.__setattr__(self, "sort", SortOrder(self.sort))


@dataclass(frozen=True, slots=True)
class Term:
    text: str
    min_score: Optional[float] = None


@dataclass(frozen=True, slots=True)
class Clause:
    keyword: Keyword
    terms: tuple[Term, ...]


@dataclass(frozen=True, slots=True)
class FilterQuery:
    clauses: tuple[Clause, ...] = ()
    options: QueryOptions = field(default_factory=QueryOptions)

    def is_empty(self) -> bool:
        return not self.clauses

    def clause_for(self, keyword: Keyword) -> Optional[Clause]:
        for clause in self.clauses:
            if clause.keyword is keyword:
                return clause
        return None

    def with_options(self, options: QueryOptions) -> "FilterQuery":
        return replace(self, options=options)


class QueryParseError(ValueError):
    """Parse failure with the character offset of the offending text."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(message)

    def __str__(self) -> str:
        return f"{self.args[0]} (at position {self.position})"


_KEYWORD_TOKEN = re.compile(r"^-{1,2}[A-Za-z]")
_SCORE_SUFFIX = re.compile(r"^(?P<text>.*?)\s*\(\s*(?P<score>[^()]*?)\s*\)$", re.DOTALL)
_COORD_TERM = re.compile(r"^[+-]?\d+(?:\.\d+)?\s*,\s*[+-]?\d+(?:\.\d+)?$")
_WS_RUN = re.compile(r"\s+")


def coordinate_of(text: str) -> Optional[tuple[float, float]]:
    """Interpret a location term as a ``lat,lon`` pair, if it is one."""
    if not _COORD_TERM.match(text):
        return None
    lat_s, lon_s = text.split(",", 1)
    return float(lat_s), float(lon_s)


def _tokenize(text: str) -> list[tuple[int, str]]:
    """Whitespace-split ``text`` into (offset, token) pairs."""
    out = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        out.append((i, text[i:j]))
        i = j
    return out


def _resolve_keyword(token: str, pos: int) -> Keyword:
    word = token.lstrip("-").lower()
    table = _BY_LONG if token.startswith("--") else _BY_ALIAS
    kw = table.get(word)
    if kw is None:
        valid = ", ".join(f"{k.long}/{k.alias}" for k in Keyword)
        raise QueryParseError(f"unknown keyword {token!r}; valid keywords: {valid}", pos)
    return kw


def _parse_score(raw: str, pos: int, keyword: Keyword) -> float:
    if keyword not in SCORED_KEYWORDS:
        raise QueryParseError(f"confidence scores are not allowed for {keyword.long}", pos)
    try:
        score = float(raw)
    except ValueError:
        raise QueryParseError(f"unparsable confidence score {raw!r}", pos) from None
    if not (0.0 < score <= 1.0):
        raise QueryParseError(f"confidence score {raw} outside (0, 1]", pos)
    return score


def _normalize_date(text: str, pos: int) -> str:
    for fmt in ("%Y-%m-%d", "%Y/%m/%d"):
        try:
            return datetime.strptime(text, fmt).date().isoformat()
        except ValueError:
            continue
    raise QueryParseError(f"invalid date {text!r}; expected yyyy/mm/dd or yyyy-mm-dd", pos)


def _parse_term(raw: str, pos: int, keyword: Keyword) -> Term:
    raw = raw.strip()
    text, score = raw, None
    suffix = _SCORE_SUFFIX.match(raw)
    if suffix is not None:
        text = suffix.group("text")
        score = _parse_score(suffix.group("score"), pos, keyword)
        if not text.strip():
            raise QueryParseError("confidence score without a preceding term", pos)

    text = _WS_RUN.sub(" ", text.strip()).lower()
    if not text:
        raise QueryParseError(f"empty term for {keyword.long}", pos)

    if keyword is Keyword.WEEKDAYS:
        if text not in WEEKDAY_NAMES:
            names = ", ".join(WEEKDAY_NAMES)
            raise QueryParseError(f"unknown weekday {text!r}; expected one of {names}", pos)
    elif keyword is Keyword.DATE:
        text = _normalize_date(text, pos)
    elif keyword is Keyword.LOCATION:
        coord = coordinate_of(text)
        if coord is not None:
            lat, lon = coord
            if not (-90.0 <= lat <= 90.0):
                raise QueryParseError(f"latitude {lat} outside [-90, 90]", pos)
            if not (-180.0 <= lon <= 180.0):
                raise QueryParseError(f"longitude {lon} outside [-180, 180]", pos)
            text = f"{lat},{lon}"
        elif "," in text:
            raise QueryParseError(
                "commas inside --location terms are reserved for lat,lon pairs; "
                "separate location terms with ';'",
                pos,
            )
    return Term(text=text, min_score=score)


def _split_terms(chunk: str, chunk_start: int, keyword: Keyword) -> tuple[Term, ...]:
    sep = ";" if keyword is Keyword.LOCATION else ","
    terms: list[Term] = []
    offset = 0
    for piece in chunk.split(sep):
        lead = len(piece) - len(piece.lstrip())
        pos = chunk_start + offset + lead
        terms.append(_parse_term(piece, pos, keyword))
        offset += len(piece) + 1
    return tuple(terms)


def parse(text: str, options: Optional[QueryOptions] = None) -> FilterQuery:
    """Parse a filter query string into its AST.

    The empty (or all-whitespace) string is the designated empty query and
    matches everything, subject to options. Term order inside OR-combining
    clauses is normalized at parse time (it never affects the hit set), so
    equal queries compare equal as ASTs.
    """
    opts = options if options is not None else QueryOptions()
    tokens = _tokenize(text)
    if not tokens:
        return FilterQuery(clauses=(), options=opts)

    # Group boundaries: a token opens a group iff it looks like a keyword.
    groups: list[tuple[int, str, int, int]] = []  # (kw_pos, kw_token, chunk_start, chunk_end)
    for idx, (pos, token) in enumerate(tokens):
        if _KEYWORD_TOKEN.match(token):
            if groups:
                prev = groups[-1]
                groups[-1] = (prev[0], prev[1], prev[2], pos)
            groups.append((pos, token, pos + len(token), len(text)))
        elif not groups:
            raise QueryParseError(
                f"expected a keyword such as --concepts, got {token!r}", pos
            )

    clauses: list[Clause] = []
    seen: set[Keyword] = set()
    for kw_pos, kw_token, chunk_start, chunk_end in groups:
        keyword = _resolve_keyword(kw_token, kw_pos)
        if keyword in seen:
            raise QueryParseError(f"duplicate keyword {keyword.long}", kw_pos)
        seen.add(keyword)
        chunk = text[chunk_start:chunk_end]
        if not chunk.strip():
            raise QueryParseError(f"keyword {keyword.long} has no terms", kw_pos)
        terms = _split_terms(chunk, chunk_start, keyword)
        if keyword not in SCORED_KEYWORDS:
            terms = tuple(sorted(terms, key=lambda t: t.text))
        clauses.append(Clause(keyword=keyword, terms=terms))

    # Clause order carries no semantics (clauses AND together), so normalize
    # to the fixed keyword order; equal queries then compare equal as ASTs.
    order = {kw: i for i, kw in enumerate(Keyword)}
    clauses.sort(key=lambda c: order[c.keyword])
    return FilterQuery(clauses=tuple(clauses), options=opts)


# -- canonical form -----------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Canonical:
    text: str
    digest: str


def _render_term(term: Term) -> str:
    if term.min_score is None:
        return term.text
    return f"{term.text}({term.min_score:.2f})"


def _render_clause(clause: Clause) -> str:
    sep = ";" if clause.keyword is Keyword.LOCATION else ","
    terms = clause.terms
    if clause.keyword not in SCORED_KEYWORDS:
        terms = tuple(sorted(terms, key=lambda t: t.text))
    return f"{clause.keyword.long} " + sep.join(_render_term(t) for t in terms)


def canonical_text(q: FilterQuery) -> str:
    """Render the canonical query string: fixed keyword order, long-form
    keywords, sorted OR terms, two-decimal explicit scores."""
    order = {kw: i for i, kw in enumerate(Keyword)}
    clauses = sorted(q.clauses, key=lambda c: order[c.keyword])
    return " ".join(_render_clause(c) for c in clauses)


def _options_tag(options: QueryOptions) -> str:
    return (
        f"score={options.global_score:.4f};limit={options.limit};"
        f"reduced={int(options.reduced)};sort={options.sort.value}"
    )


def canonicalize(q: FilterQuery) -> Canonical:
    """Canonical string plus a stable digest of that string and the options."""
    text = canonical_text(q)
    digest = hashlib.sha256(f"{text}\n{_options_tag(q.options)}".encode()).hexdigest()[:16]
    return Canonical(text=text, digest=digest)


def canonicalize_stages(
    stages: Sequence[FilterQuery],
    max_span_s: Optional[float] = None,
    same_day: bool = True,
) -> Canonical:
    """Canonical form of a temporal chain: per-stage canonical strings joined
    for display, digested together with the span policy and final options."""
    if not stages:
        raise ValueError("temporal chain has no stages")
    texts = [canonical_text(s) for s in stages]
    span = "day" if max_span_s is None else f"{max_span_s:g}s"
    tail = f"span={span};same_day={int(same_day)};{_options_tag(stages[-1].options)}"
    blob = "\x1e".join(texts) + "\n" + tail
    digest = hashlib.sha256(blob.encode()).hexdigest()[:16]
    return Canonical(text=" ~> ".join(texts), digest=digest)


@dataclass(frozen=True, slots=True)
class KeywordInfo:
    long: str
    alias: str
    domain: str


def list_keywords() -> list[KeywordInfo]:
    """All seven keywords with their aliases and value-domain descriptions."""
    return [KeywordInfo(kw.long, kw.alias, _KEYWORD_DOMAINS[kw]) for kw in Keyword]
