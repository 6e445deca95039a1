"""lifegrep: interactive lifelog retrieval over per-image metadata."""

from .cluster import assign_clusters, cosine_similarity
from .dsl import (
    FilterQuery,
    QueryOptions,
    QueryParseError,
    SortOrder,
    canonicalize,
    list_keywords,
    parse,
)
from .engine import (
    IndexSet,
    ResultPage,
    TemporalQuery,
    build_indexes,
    evaluate,
    evaluate_temporal,
    link_queries,
    neighbors,
    radius_search,
)
from .explore import autocomplete, day_summaries
from .history import HistoryStore
from .ingest import IngestConfig, ingest_corpus
from .model import Corpus, CorpusError, GeoPoint, ImageRecord, NamedTimeTable, UnknownRecordError
from .synthetic import generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "CorpusError",
    "FilterQuery",
    "GeoPoint",
    "HistoryStore",
    "ImageRecord",
    "IndexSet",
    "IngestConfig",
    "NamedTimeTable",
    "QueryOptions",
    "QueryParseError",
    "ResultPage",
    "SortOrder",
    "TemporalQuery",
    "UnknownRecordError",
    "assign_clusters",
    "autocomplete",
    "build_indexes",
    "canonicalize",
    "cosine_similarity",
    "day_summaries",
    "evaluate",
    "evaluate_temporal",
    "generate_synthetic",
    "ingest_corpus",
    "link_queries",
    "list_keywords",
    "neighbors",
    "parse",
    "radius_search",
    "__version__",
]
