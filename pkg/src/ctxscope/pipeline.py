"""End-to-end glue: offline index building and the online relate pipeline.

Both the CLI and the HTTP server call into this module, and both emit JSON
through the single serializer here so their outputs are byte-identical.
"""

from __future__ import annotations

import json
from typing import Callable, Iterable, Sequence

import numpy as np

from . import index as index_mod
from . import projector
from .index import DEFAULT_BACKGROUND_SAMPLE, EntityId, SemanticIndex
from .ingest import ArticleRecord, Vocabulary, build_vocabulary, extract_entities, load_stopwords
from .layout import DEFAULT_EDGES_PER_NODE, ContextNetwork, build_network
from .projector import ProjectorConfig, RowCache
from .query import (
    DEFAULT_CANDIDATES,
    DEFAULT_DISPLAY,
    ScoredEntity,
    parse_query,
    query_vector,
    rank_by_specificity,
    specificity_score,
    top_candidates,
)

KIND_COLORS = {
    "term": "#1f77b4",
    "author": "#f2c94c",
    "journal": "#2ca02c",
    "dewey": "#9467bd",
}
QUERY_COLOR = "#d62728"


def build_index(
    corpus: Callable[[], Iterable[ArticleRecord]] | Sequence[ArticleRecord],
    *,
    dims: int = projector.DEFAULT_DIMS,
    seed: int = 1,
    max_terms: int = 1_000_000,
    stopwords=None,
    background_sample: int = DEFAULT_BACKGROUND_SAMPLE,
) -> tuple[SemanticIndex, Vocabulary]:
    """Two-pass offline build: vocabulary, then streamed event accumulation.

    ``corpus`` is either a sequence of records or a zero-argument callable
    returning a fresh iterator (so file-backed corpora are streamed twice
    instead of held in memory). Entity rows are created on first sight, in
    record order, which makes the whole build deterministic.
    """
    stopwords = load_stopwords() if stopwords is None else stopwords
    passes = corpus if callable(corpus) else (lambda: corpus)

    vocab = build_vocabulary(passes(), max_terms, stopwords)
    config = ProjectorConfig(seed=seed, dims=dims, vocab_size=vocab.size)
    cache = RowCache(config)

    order: list[EntityId] = []
    rows: dict[EntityId, np.ndarray] = {}
    for record in passes():
        for event in extract_entities(record, vocab):
            vec = rows.get(event.entity)
            if vec is None:
                vec = np.zeros(config.dims, dtype=np.int64)
                rows[event.entity] = vec
                order.append(event.entity)
            if event.cooccurring_terms:
                vec += projector.project_counts(config, event.cooccurring_terms, cache)
    projected = [projector.ProjectedRow(e, rows[e]) for e in order]
    built = index_mod.from_projection(config, projected, background_sample=background_sample)
    return built, vocab


def relate(
    index: SemanticIndex,
    raw: str,
    *,
    stopwords=None,
    type_filter: frozenset[str] | None = None,
    k_display: int = DEFAULT_DISPLAY,
    k_candidates: int = DEFAULT_CANDIDATES,
    edges_per_node: int = DEFAULT_EDGES_PER_NODE,
) -> ContextNetwork:
    """Full online pipeline: parse, retrieve, filter, lay out.

    The displayed network holds the query entities (always shown, flagged)
    plus the k_display most specific non-query candidates, mirroring a
    query-in-red-plus-20-neighbours picture.
    """
    stopwords = load_stopwords() if stopwords is None else stopwords
    parsed = parse_query(raw, index, stopwords, type_filter)
    qvec = query_vector(parsed, index)
    candidates = top_candidates(qvec, index, type_filter, k_candidates)

    query_rows = {index.row_index(e) for e in parsed.resolved}
    ranked = rank_by_specificity(
        [c for c in candidates if c.row not in query_rows], index.background, k_display
    )

    qnorm = float(np.linalg.norm(qvec))
    query_scored = []
    for entity in parsed.resolved:
        r = index.row_index(entity)
        s = float(np.dot(index.matrix[r].astype(np.float64), qvec))
        s /= float(index.norms[r]) * qnorm
        s = min(1.0, max(-1.0, s))
        query_scored.append(
            ScoredEntity(
                entity=entity,
                similarity=s,
                specificity=specificity_score(s, float(index.mu[r]), float(index.sigma[r])),
                row=r,
            )
        )

    network = build_network(ranked, query_scored, index, edges_per_node)
    network.query = parsed
    network.dims = index.config.dims
    network.k_display = k_display
    network.k_candidates = k_candidates
    return network


def network_payload(network: ContextNetwork, elapsed_ms: float = 0.0) -> dict:
    """The one JSON shape served over HTTP and printed by the CLI."""
    parsed = network.query
    return {
        "query": {
            "raw": parsed.raw if parsed else "",
            "resolved": [
                {"kind": e.kind, "key": e.key} for e in (parsed.resolved if parsed else [])
            ],
            "unresolved": list(parsed.unresolved) if parsed else [],
        },
        "nodes": [
            {
                "id": f"{n.entity.kind}:{n.entity.key}",
                "kind": n.entity.kind,
                "label": n.label,
                "x": n.x,
                "y": n.y,
                "similarity": n.similarity,
                "specificity": n.specificity,
                "is_query": n.is_query,
            }
            for n in network.nodes
        ],
        "edges": [
            {"source": e.source, "target": e.target, "weight": e.weight}
            for e in network.edges
        ],
        "meta": {
            "dims": network.dims,
            "k": network.k_display,
            "candidates": network.k_candidates,
            "elapsed_ms": elapsed_ms,
        },
    }


def payload_json(payload: dict) -> str:
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def network_dot(network: ContextNetwork) -> str:
    """Graphviz rendering of the network (undirected, nodes colored by kind)."""
    lines = ["graph context {", "  node [style=filled fontname=Helvetica];"]
    ids = []
    for n in network.nodes:
        node_id = f"{n.entity.kind}:{n.entity.key}"
        ids.append(node_id)
        color = QUERY_COLOR if n.is_query else KIND_COLORS[n.entity.kind]
        lines.append(
            f"  {_dot_quote(node_id)} [label={_dot_quote(n.label)} fillcolor={_dot_quote(color)}];"
        )
    for e in network.edges:
        width = 1.0 + 2.0 * min(1.0, max(0.0, e.weight))
        lines.append(
            f"  {_dot_quote(ids[e.source])} -- {_dot_quote(ids[e.target])} [penwidth={width:.2f}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def network_tsv(network: ContextNetwork) -> str:
    """Ranked entity table: one node per line."""
    out = ["kind\tkey\tsimilarity\tspecificity\tis_query"]
    for n in network.nodes:
        out.append(
            f"{n.entity.kind}\t{n.entity.key}\t{n.similarity:.6f}\t{n.specificity:.6f}\t"
            f"{1 if n.is_query else 0}"
        )
    return "\n".join(out) + "\n"
