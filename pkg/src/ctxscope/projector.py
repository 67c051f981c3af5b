"""Random projection of entity/term co-occurrence counts.

The reduced representation of an entity is the product of its (never
materialized) term-count vector with a fixed random sign matrix. Rows of the
sign matrix are regenerated on demand from a counter-based generator keyed on
(seed, term column), so the matrix itself is never stored. Accumulation is
done in exact integer arithmetic and converted to float32 only at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, MutableMapping, Sequence

import numpy as np

from .errors import IndexOutOfRangeError

DEFAULT_DIMS = 600

_U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class ProjectorConfig:
    """Seed, reduced dimension, and vocabulary size; fully determines the projection."""

    seed: int
    dims: int = DEFAULT_DIMS
    vocab_size: int = 0

    def __post_init__(self):
        if not 0 <= self.seed <= _U64_MAX:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if self.dims < 1:
            raise ValueError(f"dims must be >= 1, got {self.dims}")
        if self.vocab_size < 1:
            raise ValueError(f"vocab_size must be >= 1, got {self.vocab_size}")
        if self.dims >= self.vocab_size:
            raise ValueError(
                f"dims ({self.dims}) must be smaller than the vocabulary "
                f"({self.vocab_size}) for the reduction to be meaningful"
            )


def projection_row(config: ProjectorConfig, term_index: int) -> np.ndarray:
    """Return the +-1 sign row for one term column, as an int8 array of length dims.

    Pure function of (seed, term_index): signs are the raw bit stream of a
    Philox counter-based generator keyed on that pair, so repeated calls are
    identical and no state is shared between columns.
    """
    if not 0 <= term_index < config.vocab_size:
        raise IndexOutOfRangeError(
            f"term index {term_index} outside vocabulary of size {config.vocab_size}"
        )
    n_words = (config.dims + 63) // 64
    key = np.array([config.seed, term_index], dtype=np.uint64)
    raw = np.random.Philox(key=key).random_raw(n_words)
    bits = np.unpackbits(raw.view(np.uint8), bitorder="little", count=config.dims)
    signs = bits.astype(np.int8)
    signs <<= 1
    signs -= 1
    return signs


class RowCache:
    """Memo for projection rows, keyed by term column. Shared across one build."""

    def __init__(self, config: ProjectorConfig):
        self.config = config
        self._rows: MutableMapping[int, np.ndarray] = {}

    def get(self, term_index: int) -> np.ndarray:
        row = self._rows.get(term_index)
        if row is None:
            row = projection_row(self.config, term_index)
            self._rows[term_index] = row
        return row


def project_counts(
    config: ProjectorConfig,
    term_counts: Iterable[tuple[int, int]],
    cache: RowCache | None = None,
) -> np.ndarray:
    """Project a sparse term-count profile: sum of count * sign_row, exact int64."""
    items = list(term_counts)
    out = np.zeros(config.dims, dtype=np.int64)
    if not items:
        return out
    rows = np.empty((len(items), config.dims), dtype=np.int8)
    counts = np.empty(len(items), dtype=np.int64)
    for i, (t, c) in enumerate(items):
        rows[i] = cache.get(t) if cache is not None else projection_row(config, t)
        counts[i] = c
    np.matmul(counts, rows.astype(np.int64), out=out)
    return out


@dataclass
class ProjectedRow:
    """One entity's signed accumulator vector (exact integers during build)."""

    entity: object
    vector: np.ndarray  # int64, length dims


def new_row(entity, config: ProjectorConfig) -> ProjectedRow:
    return ProjectedRow(entity, np.zeros(config.dims, dtype=np.int64))


def accumulate(
    row: ProjectedRow,
    event,
    config: ProjectorConfig,
    cache: RowCache | None = None,
) -> ProjectedRow:
    """Fold one occurrence event into an entity row: vector += count * sign_row per term."""
    if event.entity != row.entity:
        raise ValueError(f"event for {event.entity} applied to row of {row.entity}")
    if event.cooccurring_terms:
        row.vector += project_counts(config, event.cooccurring_terms, cache)
    return row


def finalize(rows: Sequence[ProjectedRow]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Convert integer accumulators to (float32 matrix, float32 norms, active flags).

    Zero rows are flagged inactive; they stay in the table but are excluded
    from search.
    """
    if not rows:
        return (
            np.zeros((0, 0), dtype=np.float32),
            np.zeros(0, dtype=np.float32),
            np.zeros(0, dtype=bool),
        )
    matrix = np.stack([r.vector for r in rows]).astype(np.float32)
    norms = np.linalg.norm(matrix.astype(np.float64), axis=1).astype(np.float32)
    active = norms > 0.0
    return matrix, norms, active
