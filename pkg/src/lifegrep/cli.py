"""Command-line interface.

Subcommands: ingest (validate + stats), gen (synthetic corpus), query
(one-shot search), serve (HTTP service), mock-submit-server (judge stand-in).
Every error exits nonzero with an actionable message on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from datetime import date

from .config import ApiConfig, load_config
from .dsl import QueryOptions, QueryParseError, SortOrder, canonicalize, parse
from .engine import build_indexes, evaluate
from .ingest import ingest_corpus
from .model import CorpusError, format_rfc3339
from .synthetic import DEFAULT_FEATURE_DIM, DEFAULT_START_DATE, generate_synthetic


def _cmd_ingest(args: argparse.Namespace) -> int:
    corpus = ingest_corpus(args.file)
    kinds = Counter(det.kind.value for rec in corpus for det in rec.detections)
    days = {rec.local_date() for rec in corpus}
    clusters = {rec.cluster_id for rec in corpus}
    stats = {
        "records": len(corpus),
        "days": len(days),
        "first_date": min(days).isoformat() if days else None,
        "last_date": max(days).isoformat() if days else None,
        "clusters": len(clusters),
        "detections": dict(sorted(kinds.items())),
        "feature_dim": corpus.feature_dim,
    }
    if args.json:
        print(json.dumps(stats, indent=2))
    else:
        for key, value in stats.items():
            print(f"{key}: {value}")
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    manifest = generate_synthetic(
        seed=args.seed,
        days=args.days,
        images_per_day=args.images_per_day,
        out_path=args.out,
        manifest_path=args.manifest,
        start_date=date.fromisoformat(args.start_date),
        feature_dim=args.feature_dim,
        plant_story=args.plant_story,
    )
    print(f"wrote {manifest['record_count']} records over {args.days} days to {args.out}")
    if manifest["story"]:
        print(f"story target: {manifest['story']['target_id']} on {manifest['story']['day']}")
    return 0


def _cmd_query(args: argparse.Namespace) -> int:
    options = QueryOptions(
        global_score=args.score,
        limit=args.limit,
        reduced=args.reduced,
        sort=SortOrder(args.sort),
    )
    query = parse(args.query, options=options)
    corpus = ingest_corpus(args.corpus)
    idx = build_indexes(corpus)
    page = evaluate(query, idx)
    if args.json:
        print(
            json.dumps(
                {
                    "canonical": canonicalize(query).text,
                    "total": page.total_before_limit,
                    "hits": [
                        {"id": h.id, "score": h.score, "matched_terms": list(h.matched_terms)}
                        for h in page.hits
                    ],
                },
                indent=2,
            )
        )
        return 0
    print(f"# {page.total_before_limit} hits (showing {len(page.hits)})")
    for hit in page.hits:
        rec = corpus.get(hit.id)
        loc = rec.named_location or "-"
        terms = ",".join(hit.matched_terms) or "-"
        print(f"{hit.id}\t{format_rfc3339(rec.ts)}\t{hit.score:.3f}\t{loc}\t{terms}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .api import serve

    config = load_config(args.config) if args.config else ApiConfig(corpus=args.corpus)
    if args.corpus:
        config.corpus = args.corpus
    if args.listen:
        config.listen = args.listen
    config.require_corpus()
    serve(config)
    return 0


def _cmd_mock_submit_server(args: argparse.Namespace) -> int:
    import uvicorn

    from .submit import make_mock_judge

    accept = set(args.accept.split(",")) if args.accept else None
    app = make_mock_judge(accept_ids=accept)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lifegrep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate a metadata file and report stats")
    p_ingest.add_argument("file")
    p_ingest.add_argument("--json", action="store_true")
    p_ingest.set_defaults(func=_cmd_ingest)

    p_gen = sub.add_parser("gen", help="generate a deterministic synthetic corpus")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--days", type=int, required=True)
    p_gen.add_argument("--images-per-day", type=int, required=True)
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--manifest", default=None, help="default: <out>.manifest.json")
    p_gen.add_argument("--start-date", default=DEFAULT_START_DATE.isoformat())
    p_gen.add_argument("--feature-dim", type=int, default=DEFAULT_FEATURE_DIM)
    p_gen.add_argument("--plant-story", action="store_true")
    p_gen.set_defaults(func=_cmd_gen)

    p_query = sub.add_parser("query", help="run one filter query against a metadata file")
    p_query.add_argument("query")
    p_query.add_argument("--corpus", required=True)
    p_query.add_argument("--score", type=float, default=QueryOptions().global_score)
    p_query.add_argument("--limit", type=int, default=QueryOptions().limit)
    p_query.add_argument("--reduced", action="store_true")
    p_query.add_argument("--sort", choices=[s.value for s in SortOrder], default="date")
    p_query.add_argument("--json", action="store_true")
    p_query.set_defaults(func=_cmd_query)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", default=None, help="JSON config file (docs/formats.md)")
    p_serve.add_argument("--corpus", default=None, help="metadata file (overrides config)")
    p_serve.add_argument("--listen", default=None, help="host:port (overrides config)")
    p_serve.set_defaults(func=_cmd_serve)

    p_mock = sub.add_parser("mock-submit-server", help="run the mock submission judge")
    p_mock.add_argument("--host", default="127.0.0.1")
    p_mock.add_argument("--port", type=int, default=8799)
    p_mock.add_argument("--accept", default=None, help="comma list of accepted ids (default: all)")
    p_mock.set_defaults(func=_cmd_mock_submit_server)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QueryParseError as exc:
        print(f"query error: {exc}", file=sys.stderr)
        return 2
    except CorpusError as exc:
        print(f"corpus error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
