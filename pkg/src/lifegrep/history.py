"""Deduplicating query-history session store.

Entries are keyed by the canonical query hash; re-recording a query moves
its entry to the front instead of duplicating it. Capacity-bounded with
oldest-entry eviction. Each entry tracks the first, last and longest viewed
images. The JSON export below is the documented interchange format the web
client mirrors into browser local storage.
"""

from __future__ import annotations

import threading
import time
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Union

DEFAULT_CAPACITY = 200

QueryText = Union[str, list[str]]  # one canonical string, or one per temporal stage


class UnknownEntryError(KeyError):
    def __init__(self, entry_id: str):
        self.entry_id = entry_id
        super().__init__(entry_id)

    def __str__(self) -> str:
        return f"unknown history entry: {self.entry_id!r}"


@dataclass
class HistoryEntry:
    id: str
    query: QueryText
    issued_at: float  # unix seconds
    first_viewed: Optional[str] = None
    last_viewed: Optional[str] = None
    longest_viewed: Optional[str] = None
    longest_view_ms: int = 0


class HistoryStore:
    """One session's history. Mutations are serialized with a lock."""

    def __init__(self, capacity: int = DEFAULT_CAPACITY, clock: Callable[[], float] = time.time):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._clock = clock
        self._entries: dict[str, HistoryEntry] = {}  # insertion order = recency, newest last
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._entries)

    def record(self, entry_id: str, query: QueryText) -> HistoryEntry:
        """Insert at the front, or move an existing entry to the front."""
        with self._lock:
            entry = self._entries.pop(entry_id, None)
            if entry is None:
                entry = HistoryEntry(id=entry_id, query=query, issued_at=self._clock())
            else:
                entry.issued_at = self._clock()
            self._entries[entry_id] = entry
            while len(self._entries) > self.capacity:
                oldest = next(iter(self._entries))
                del self._entries[oldest]
            return entry

    def view_event(self, entry_id: str, record_id: str, view_ms: int) -> HistoryEntry:
        """Note that ``record_id`` was viewed for ``view_ms`` under this entry."""
        if view_ms < 0:
            raise ValueError("view_ms must be >= 0")
        with self._lock:
            entry = self._entries.get(entry_id)
            if entry is None:
                raise UnknownEntryError(entry_id)
            if entry.first_viewed is None:
                entry.first_viewed = record_id
                entry.longest_viewed = record_id
                entry.longest_view_ms = view_ms
            elif view_ms > entry.longest_view_ms:
                entry.longest_viewed = record_id
                entry.longest_view_ms = view_ms
            entry.last_viewed = record_id
            return entry

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def entries(self) -> list[HistoryEntry]:
        """Most recent first."""
        with self._lock:
            return list(reversed(self._entries.values()))

    def get(self, entry_id: str) -> Optional[HistoryEntry]:
        return self._entries.get(entry_id)

    # -- interchange format ----------------------------------------------------

    def export(self) -> list[dict]:
        """The documented JSON-ready form, most recent first."""
        return [asdict(e) for e in self.entries()]

    def load(self, doc: list[dict]) -> None:
        """Replace contents from an exported document. Raises ValueError on
        malformed input (callers reset corrupt stores)."""
        if not isinstance(doc, list):
            raise ValueError("history document must be a JSON array")
        parsed: list[HistoryEntry] = []
        for item in doc:
            if not isinstance(item, dict) or "id" not in item or "query" not in item:
                raise ValueError(f"malformed history entry: {item!r}")
            query = item["query"]
            if not isinstance(query, str) and not (
                isinstance(query, list) and all(isinstance(s, str) for s in query)
            ):
                raise ValueError(f"malformed history query: {query!r}")
            parsed.append(
                HistoryEntry(
                    id=str(item["id"]),
                    query=query,
                    issued_at=float(item.get("issued_at", 0.0)),
                    first_viewed=item.get("first_viewed"),
                    last_viewed=item.get("last_viewed"),
                    longest_viewed=item.get("longest_viewed"),
                    longest_view_ms=int(item.get("longest_view_ms", 0)),
                )
            )
        with self._lock:
            self._entries.clear()
            for entry in reversed(parsed[: self.capacity]):
                self._entries[entry.id] = entry
