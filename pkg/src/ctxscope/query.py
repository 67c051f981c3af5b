"""On-line query pipeline: parse, average, retrieve, and rank by specificity.

A query is free text plus optional bracket tags like ``[author:van grondelle r]``.
Resolved entities are averaged into one query vector; the most similar entities
are retrieved by exact full scan, then re-ranked by how far each candidate's
query similarity sits above its own background similarity distribution. That
standardized score suppresses hub entities that are close to everything.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyQueryError, NoSignalError
from .index import (
    KIND_AUTHOR,
    KIND_DEWEY,
    KIND_JOURNAL,
    KIND_TERM,
    SIGMA_FLOOR,
    BackgroundStats,
    EntityId,
    SemanticIndex,
)
from .ingest import normalize_name, tokenize

DEFAULT_CANDIDATES = 500
DEFAULT_DISPLAY = 20

# cosine gap below which the float32 pre-scan could misorder candidates;
# everything within the margin of the cut is re-scored in float64
_RESCORE_MARGIN = 1e-3

_TAG_RE = re.compile(r"\[\s*(author|journal|issn|dewey)\s*:\s*([^\]]*)\]", re.IGNORECASE)
_TAG_KIND = {
    "author": KIND_AUTHOR,
    "journal": KIND_JOURNAL,
    "issn": KIND_JOURNAL,
    "dewey": KIND_DEWEY,
}


@dataclass
class ParsedQuery:
    """Resolution of a raw query against the index."""

    raw: str
    resolved: list[EntityId]
    unresolved: list[str]
    type_filter: frozenset[str] | None = None


@dataclass
class ScoredEntity:
    """One retrieval result: cosine to the query plus the standardized specificity."""

    entity: EntityId
    similarity: float
    specificity: float | None = None
    row: int = -1


def parse_query(
    raw: str,
    index: SemanticIndex,
    stopwords,
    type_filter: frozenset[str] | None = None,
) -> ParsedQuery:
    """Resolve bracket tags and free text against the index.

    Tagged segments address non-term entities directly (``issn`` is an alias
    for ``journal``). The remaining text is tokenized exactly like ingest and
    matched against term entities. Tokens without an active index entry are
    reported in ``unresolved``; duplicates resolve once.
    """
    resolved: list[EntityId] = []
    unresolved: list[str] = []
    seen_entities: set[EntityId] = set()
    seen_unresolved: set[str] = set()

    def attempt(entity: EntityId, shown: str):
        if entity in index and index.active[index.row_index(entity)]:
            if entity not in seen_entities:
                seen_entities.add(entity)
                resolved.append(entity)
        elif shown not in seen_unresolved:
            seen_unresolved.add(shown)
            unresolved.append(shown)

    for match in _TAG_RE.finditer(raw):
        kind = _TAG_KIND[match.group(1).lower()]
        key = normalize_name(match.group(2))
        if key:
            attempt(EntityId(kind, key), f"[{kind}:{key}]")
        elif match.group(0) not in seen_unresolved:
            seen_unresolved.add(match.group(0))
            unresolved.append(match.group(0))

    free_text = _TAG_RE.sub(" ", raw)
    for token in tokenize(free_text, stopwords):
        attempt(EntityId(KIND_TERM, token), token)

    if not resolved:
        raise EmptyQueryError(raw, unresolved)
    return ParsedQuery(raw=raw, resolved=resolved, unresolved=unresolved, type_filter=type_filter)


def query_vector(parsed: ParsedQuery, index: SemanticIndex) -> np.ndarray:
    """Arithmetic mean of the unit-length rows of the resolved entities (float64)."""
    if not parsed.resolved:
        raise EmptyQueryError(parsed.raw, parsed.unresolved)
    rows = np.array([index.row_index(e) for e in parsed.resolved])
    units = index.matrix[rows].astype(np.float64) / index.norms[rows].astype(np.float64)[:, None]
    return units.mean(axis=0)


def _rescore_f64(index: SemanticIndex, rows: np.ndarray, qvec: np.ndarray, qnorm: float) -> np.ndarray:
    """Exact float64 cosines for the given rows, clipped to [-1, 1]."""
    sims = np.empty(len(rows), dtype=np.float64)
    block = 16384
    for start in range(0, len(rows), block):
        chunk = rows[start : start + block]
        sims[start : start + block] = index.matrix[chunk].astype(np.float64) @ qvec
    sims /= index.norms[rows].astype(np.float64) * qnorm
    np.clip(sims, -1.0, 1.0, out=sims)
    return sims


def top_candidates(
    qvec: np.ndarray,
    index: SemanticIndex,
    type_filter: frozenset[str] | None = None,
    k_candidates: int = DEFAULT_CANDIDATES,
) -> list[ScoredEntity]:
    """Exact top-k entities by cosine to the query vector, ties by table order.

    A float32 matrix scan pre-selects everything within a safety margin of
    the cut, and that shortlist is re-scored in float64, so the result is
    identical to a full-precision scan-and-sort without paying its cost.
    """
    if k_candidates < 1:
        raise ValueError(f"k_candidates must be >= 1, got {k_candidates}")
    qvec = np.asarray(qvec, dtype=np.float64)
    qnorm = float(np.linalg.norm(qvec))
    if qnorm == 0.0:
        raise NoSignalError("query vector is zero; entity vectors cancelled out")
    mask = index.active & index.kind_mask(type_filter)
    n_masked = int(mask.sum())
    if n_masked == 0:
        return []
    k = min(k_candidates, n_masked)

    coarse = index.matrix @ qvec.astype(np.float32)
    with np.errstate(invalid="ignore", divide="ignore"):
        coarse = coarse / (index.norms * np.float32(qnorm))
    coarse = np.where(mask, coarse, -np.inf)
    if n_masked > k:
        cut = np.partition(coarse, len(coarse) - k)[len(coarse) - k]
        shortlist = np.flatnonzero(coarse >= cut - _RESCORE_MARGIN)
    else:
        shortlist = np.flatnonzero(mask)

    sims = _rescore_f64(index, shortlist, qvec, qnorm)
    order = np.lexsort((shortlist, -sims))[:k]
    return [
        ScoredEntity(
            entity=index.entities[int(shortlist[i])],
            similarity=float(sims[i]),
            row=int(shortlist[i]),
        )
        for i in order
    ]


def specificity_score(similarity, mu, sigma):
    """Standardized distance of a query similarity from an entity's background."""
    return (similarity - mu) / max(float(sigma), SIGMA_FLOOR)


def rank_by_specificity(
    candidates: Sequence[ScoredEntity],
    background: BackgroundStats,
    k_display: int = DEFAULT_DISPLAY,
) -> list[ScoredEntity]:
    """Keep the k_display candidates whose similarity is most anomalous.

    The score is (s - mu) / sigma against each candidate's own background
    distribution: hubs have high mu, hence low scores even at high raw
    similarity, and drop out. Ties break by raw similarity, then table order.
    """
    if k_display < 0:
        raise ValueError(f"k_display must be >= 0, got {k_display}")
    if not candidates:
        return []
    rows = np.array([c.row for c in candidates])
    sims = np.array([c.similarity for c in candidates], dtype=np.float64)
    mu = background.mu[rows].astype(np.float64)
    sigma = np.maximum(background.sigma[rows].astype(np.float64), SIGMA_FLOOR)
    z = (sims - mu) / sigma
    order = np.lexsort((rows, -sims, -z))[:k_display]
    return [
        ScoredEntity(
            entity=candidates[i].entity,
            similarity=candidates[i].similarity,
            specificity=float(z[i]),
            row=candidates[i].row,
        )
        for i in order
    ]
