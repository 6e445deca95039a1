"""Domain model for a lifelog corpus.

A corpus is an immutable, timestamp-sorted list of per-image records.
Everything downstream (indexes, query evaluation, day summaries) treats it
as read-only shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date, datetime, time
from enum import Enum
from typing import Iterator, Optional, Sequence

WEEKDAY_NAMES = (
    "monday",
    "tuesday",
    "wednesday",
    "thursday",
    "friday",
    "saturday",
    "sunday",
)

FEATURE_NORM_TOLERANCE = 1e-6


class CorpusError(ValueError):
    """Raised for invalid metadata; carries the offending line and field."""

    def __init__(self, message: str, line: Optional[int] = None, fieldname: Optional[str] = None):
        self.line = line
        self.fieldname = fieldname
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if fieldname is not None:
            prefix += f"field '{fieldname}': "
        super().__init__(prefix + message)


class UnknownRecordError(KeyError):
    """Lookup of a record id that is not in the corpus."""

    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(record_id)

    def __str__(self) -> str:
        return f"unknown record id: {self.record_id!r}"


class Kind(str, Enum):
    """The three classes of precomputed visual detections."""

    CONCEPT = "concept"
    OBJECT = "object"
    ATTRIBUTE = "attribute"


@dataclass(frozen=True, slots=True)
class GeoPoint:
    lat: float
    lon: float

    def validate(self, line: Optional[int] = None) -> None:
        if not (-90.0 <= self.lat <= 90.0):
            raise CorpusError(f"latitude {self.lat} outside [-90, 90]", line, "lat")
        if not (-180.0 <= self.lon <= 180.0):
            raise CorpusError(f"longitude {self.lon} outside [-180, 180]", line, "lon")


@dataclass(frozen=True, slots=True)
class BBox:
    """Normalized rectangle; all components in [0, 1]."""

    x: float
    y: float
    w: float
    h: float


@dataclass(frozen=True, slots=True)
class Detection:
    kind: Kind
    term: str
    score: float
    bbox: Optional[BBox] = None

    def validate(self, line: Optional[int] = None) -> None:
        if not self.term:
            raise CorpusError("empty detection term", line, "detections.term")
        if self.term != self.term.lower():
            raise CorpusError(f"detection term {self.term!r} is not lowercase", line, "detections.term")
        if not (0.0 <= self.score <= 1.0):
            raise CorpusError(f"score {self.score} outside [0, 1]", line, "detections.score")
        if self.bbox is not None:
            if self.kind is not Kind.OBJECT:
                raise CorpusError(f"bbox on non-object detection {self.term!r}", line, "detections.bbox")
            for name, v in (("x", self.bbox.x), ("y", self.bbox.y), ("w", self.bbox.w), ("h", self.bbox.h)):
                if not (0.0 <= v <= 1.0):
                    raise CorpusError(f"bbox.{name} {v} outside [0, 1]", line, "detections.bbox")


@dataclass(frozen=True, slots=True)
class ImageRecord:
    """One lifelog capture plus its precomputed metadata."""

    id: str
    ts: datetime  # timezone-aware; the offset encodes local time
    geo: Optional[GeoPoint] = None
    named_location: Optional[str] = None
    detections: tuple[Detection, ...] = ()
    feature: Optional[tuple[float, ...]] = None
    cluster_id: int = -1

    def local_date(self) -> date:
        return self.ts.date()

    def local_time(self) -> time:
        return self.ts.time()

    def local_minutes(self) -> int:
        """Minutes since local midnight (named-time windows use this)."""
        return self.ts.hour * 60 + self.ts.minute

    def weekday(self) -> str:
        return WEEKDAY_NAMES[self.ts.weekday()]


def parse_rfc3339(value: str) -> datetime:
    """Parse an RFC-3339 timestamp; 'Z' is accepted, an offset is required."""
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(text)
    except ValueError:
        raise ValueError(f"invalid RFC-3339 timestamp: {value!r}") from None
    if dt.tzinfo is None:
        raise ValueError(f"timestamp missing timezone offset: {value!r}")
    return dt


def format_rfc3339(dt: datetime) -> str:
    if dt.tzinfo is None:
        raise ValueError("naive datetime")
    text = dt.isoformat()
    if text.endswith("+00:00"):
        text = text[:-6] + "Z"
    return text


def feature_norm(vec: Sequence[float]) -> float:
    return math.sqrt(math.fsum(v * v for v in vec))


def validate_feature(vec: Sequence[float], line: Optional[int] = None) -> None:
    if not vec:
        raise CorpusError("empty feature vector", line, "feat")
    norm = feature_norm(vec)
    if abs(norm - 1.0) > FEATURE_NORM_TOLERANCE:
        raise CorpusError(f"feature vector norm {norm:.8f} deviates from 1", line, "feat")


# -- named-time windows -------------------------------------------------------

def _parse_hhmm(text: str) -> int:
    parts = text.split(":")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ValueError(f"invalid time-of-day {text!r}, expected HH:MM")
    hh, mm = int(parts[0]), int(parts[1])
    if hh > 23 or mm > 59:
        raise ValueError(f"invalid time-of-day {text!r}")
    return hh * 60 + mm


DEFAULT_TIMENAMES: dict[str, tuple[str, str]] = {
    "morning": ("05:00", "11:00"),
    "noon": ("11:00", "13:00"),
    "afternoon": ("13:00", "17:00"),
    "evening": ("17:00", "22:00"),
    "night": ("22:00", "05:00"),
}

_AFTERNOON_FIXED = (13 * 60, 17 * 60)


class NamedTimeTable:
    """Named half-open local-time windows, e.g. afternoon = [13:00, 17:00).

    Windows whose end precedes their start wrap past midnight. Names are
    lowercase. The afternoon window is fixed and may not be overridden.
    """

    def __init__(self, windows: Optional[dict[str, tuple[str, str]]] = None):
        source = DEFAULT_TIMENAMES if windows is None else windows
        self._windows: dict[str, tuple[int, int]] = {}
        for name, (start, end) in source.items():
            if name != name.lower():
                raise ValueError(f"time name {name!r} must be lowercase")
            self._windows[name] = (_parse_hhmm(start), _parse_hhmm(end))
        got = self._windows.get("afternoon")
        if got is not None and got != _AFTERNOON_FIXED:
            raise ValueError("the 'afternoon' window is fixed at [13:00, 17:00)")
        self._windows.setdefault("afternoon", _AFTERNOON_FIXED)

    def names(self) -> list[str]:
        return sorted(self._windows)

    def window(self, name: str) -> Optional[tuple[int, int]]:
        """Window for ``name`` as minutes since midnight, or None."""
        return self._windows.get(name.lower())

    def window_label(self, name: str) -> Optional[str]:
        w = self.window(name)
        if w is None:
            return None
        return f"{w[0] // 60:02d}:{w[0] % 60:02d}-{w[1] // 60:02d}:{w[1] % 60:02d}"

    def contains(self, name: str, minutes: int) -> bool:
        w = self.window(name)
        if w is None:
            return False
        start, end = w
        if start == end:
            return False
        if start < end:
            return start <= minutes < end
        return minutes >= start or minutes < end  # wraps midnight


# -- corpus -------------------------------------------------------------------

@dataclass
class Corpus:
    """Timestamp-sorted lifelog records. Immutable after construction."""

    records: tuple[ImageRecord, ...]
    feature_dim: Optional[int] = None
    _by_id: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._by_id = {rec.id: i for i, rec in enumerate(self.records)}

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[ImageRecord]:
        return iter(self.records)

    def __getitem__(self, ordinal: int) -> ImageRecord:
        return self.records[ordinal]

    def ordinal_of(self, record_id: str) -> int:
        try:
            return self._by_id[record_id]
        except KeyError:
            raise UnknownRecordError(record_id) from None

    def get(self, record_id: str) -> ImageRecord:
        return self.records[self.ordinal_of(record_id)]

    def __contains__(self, record_id: str) -> bool:
        return record_id in self._by_id
