"""Near-duplicate clustering for the Reduced result mode.

Greedy chronological single-link over the timestamp-sorted corpus: a record
joins the immediately preceding record's cluster iff their feature vectors'
cosine similarity meets the threshold, the time gap is small enough and both
fall on the same local calendar date. Records without features are singleton
clusters. The pass is deterministic and streaming-friendly.
"""

from __future__ import annotations

import math
from datetime import timedelta
from typing import Optional, Sequence

from .model import CorpusError, ImageRecord

DEFAULT_SIMILARITY_THRESHOLD = 0.95
DEFAULT_MAX_GAP = timedelta(seconds=120)


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    if len(a) != len(b):
        raise CorpusError(f"mismatched feature dimensions: {len(a)} vs {len(b)}")
    dot = math.fsum(x * y for x, y in zip(a, b))
    na = math.sqrt(math.fsum(x * x for x in a))
    nb = math.sqrt(math.fsum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def assign_clusters(
    records: Sequence[ImageRecord],
    threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
    max_gap: Optional[timedelta] = DEFAULT_MAX_GAP,
) -> list[int]:
    """Cluster ids for a timestamp-sorted record sequence.

    Depends only on (timestamp, local date, feature); renaming record ids
    does not change the assignment.
    """
    if not (0.0 < threshold <= 1.0):
        raise ValueError(f"threshold {threshold} outside (0, 1]")
    gap_limit = max_gap if max_gap is not None else timedelta.max

    dim: Optional[int] = None
    for rec in records:
        if rec.feature is None:
            continue
        if dim is None:
            dim = len(rec.feature)
        elif len(rec.feature) != dim:
            raise CorpusError(
                f"mismatched feature dimensions: {len(rec.feature)} vs {dim} (record {rec.id})"
            )

    assignment: list[int] = []
    next_id = 0
    prev: Optional[ImageRecord] = None
    for rec in records:
        joins = (
            prev is not None
            and rec.feature is not None
            and prev.feature is not None
            and rec.ts - prev.ts <= gap_limit
            and rec.local_date() == prev.local_date()
            and cosine_similarity(rec.feature, prev.feature) >= threshold
        )
        if not joins:
            if assignment:
                next_id += 1
        assignment.append(next_id)
        prev = rec
    return assignment
