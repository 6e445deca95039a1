"""Service configuration, loaded from a JSON file (see docs/formats.md)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .dsl import DEFAULT_GLOBAL_SCORE, DEFAULT_LIMIT, SortOrder
from .engine import DEFAULT_COORD_MATCH_KM
from .history import DEFAULT_CAPACITY


@dataclass
class ApiConfig:
    corpus: Optional[str] = None
    listen: str = "127.0.0.1:8765"
    static_dir: Optional[str] = None  # web client assets, served at /ui
    images_dir: Optional[str] = None  # image pixel data by id, served at /images
    timenames: dict[str, tuple[str, str]] = field(default_factory=dict)
    score: float = DEFAULT_GLOBAL_SCORE
    limit: int = DEFAULT_LIMIT
    reduced: bool = False
    sort: str = SortOrder.DATE.value
    history_capacity: int = DEFAULT_CAPACITY
    submit_url: Optional[str] = None  # unset: practice mode, submissions log locally
    coord_match_km: float = DEFAULT_COORD_MATCH_KM

    def host_port(self) -> tuple[str, int]:
        host, _, port = self.listen.rpartition(":")
        if not host or not port.isdigit():
            raise ValueError(f"listen must be host:port, got {self.listen!r}")
        return host, int(port)

    def require_corpus(self) -> str:
        if not self.corpus:
            raise ValueError("config is missing the required 'corpus' path")
        return self.corpus


_KNOWN_KEYS = {
    "corpus",
    "listen",
    "static_dir",
    "images_dir",
    "timenames",
    "score",
    "limit",
    "reduced",
    "sort",
    "history_capacity",
    "submit_url",
    "coord_match_km",
}


def load_config(path: str | Path) -> ApiConfig:
    base = Path(path).parent
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("config file must hold a JSON object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "timenames" in raw:
        raw["timenames"] = {name: tuple(win) for name, win in raw["timenames"].items()}
    if raw.get("sort") is not None:
        SortOrder(raw["sort"])  # validate early
    cfg = ApiConfig(**raw)
    # paths are relative to the config file
    for attr in ("corpus", "static_dir", "images_dir"):
        value = getattr(cfg, attr)
        if value is not None and not Path(value).is_absolute():
            setattr(cfg, attr, str((base / value).resolve()))
    return cfg
