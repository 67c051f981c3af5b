"""Operator entry point: build indexes, run one-shot queries, launch the server.

Exit codes: 0 ok, 1 IO/system failure, 2 user error (e.g. a query that
resolves to nothing).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time

from . import index as index_mod
from . import pipeline, server
from .errors import ContextScopeError, EmptyQueryError
from .ingest import CorpusCounts, iter_jsonl, load_stopwords
from .projector import DEFAULT_DIMS
from .query import DEFAULT_DISPLAY


@dataclasses.dataclass
class BuildReport:
    records_read: int
    records_skipped: int
    vocab_size: int
    entities: dict[str, int]
    entity_count: int
    dims: int
    seed: int
    background_sample_size: int
    elapsed_seconds: float
    output: str


def _cmd_ingest(args) -> int:
    t0 = time.perf_counter()
    stopwords = load_stopwords(args.stopwords)
    counts = CorpusCounts()

    def corpus():
        # both vocabulary and event passes stream the file; the second pass
        # re-counts, so reset between passes
        counts.records_read = 0
        counts.records_skipped = 0
        return iter_jsonl(args.input, counts)

    built, vocab = pipeline.build_index(
        corpus,
        dims=args.dims,
        seed=args.seed,
        max_terms=args.max_terms,
        stopwords=stopwords,
        background_sample=args.background_sample,
    )
    index_mod.save(built, args.out)
    report = BuildReport(
        records_read=counts.records_read,
        records_skipped=counts.records_skipped,
        vocab_size=vocab.size,
        entities=built.counts_by_kind(),
        entity_count=len(built),
        dims=built.config.dims,
        seed=built.config.seed,
        background_sample_size=built.background_sample_size,
        elapsed_seconds=round(time.perf_counter() - t0, 3),
        output=str(args.out),
    )
    print(json.dumps(dataclasses.asdict(report), ensure_ascii=False))
    return 0


def _cmd_query(args) -> int:
    idx = index_mod.load(args.index)
    type_filter = server.parse_types(args.types)
    t0 = time.perf_counter()
    network = pipeline.relate(
        idx, args.text, type_filter=type_filter, k_display=args.k
    )
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    if args.format == "json":
        payload = pipeline.network_payload(network, elapsed_ms=round(elapsed_ms, 3))
        print(pipeline.payload_json(payload))
    elif args.format == "dot":
        sys.stdout.write(pipeline.network_dot(network))
    else:
        sys.stdout.write(pipeline.network_tsv(network))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    index_path = os.environ.get("CTXSCOPE_INDEX") or args.index
    if not index_path:
        print("ctx serve: no index given (use --index or CTXSCOPE_INDEX)", file=sys.stderr)
        return 1
    app = server.create_app(
        index_path=index_path,
        static_dir=args.static_dir,
        cors_origins=tuple(o for o in (args.cors_origin or "").split(",") if o),
    )
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"ctx serve: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        # uvicorn exits with its own startup-failure code on e.g. a busy port
        return 1 if exc.code else 0
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctx", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build a semantic index from a JSON-lines corpus")
    p.add_argument("--input", required=True, help="corpus file, one JSON record per line")
    p.add_argument("--out", required=True, help="index file to write")
    p.add_argument("--dims", type=int, default=DEFAULT_DIMS)
    p.add_argument("--max-terms", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--stopwords", default=None, help="stop word file (default: shipped list)")
    p.add_argument("--background-sample", type=int, default=index_mod.DEFAULT_BACKGROUND_SAMPLE)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("query", help="run one query against an index")
    p.add_argument("text")
    p.add_argument("--index", required=True)
    p.add_argument("--types", default=None, help="comma list of kinds (term,author,journal,dewey)")
    p.add_argument("-k", type=int, default=DEFAULT_DISPLAY)
    p.add_argument("--format", choices=("json", "dot", "tsv"), default="json")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("serve", help="serve the query API and web UI")
    p.add_argument("--index", default=None)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static-dir", default=None)
    p.add_argument("--cors-origin", default=None, help="comma list of allowed origins")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EmptyQueryError as exc:
        print(f"ctx: {exc} (ignored: {', '.join(exc.unresolved) or 'none'})", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"ctx: {exc}", file=sys.stderr)
        return 2
    except ContextScopeError as exc:
        print(f"ctx: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ctx: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
