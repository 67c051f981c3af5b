"""2D placement of the surviving entities and construction of the context network.

Placement is classical (Torgerson) multidimensional scaling on cosine
distances; edges connect each displayed node to its most similar co-displayed
nodes, so the picture stays sparse and readable at ~20 nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError
from .index import EntityId, SemanticIndex
from .query import ParsedQuery, ScoredEntity

DEFAULT_EDGES_PER_NODE = 3


@dataclass
class NetworkNode:
    entity: EntityId
    label: str
    x: float
    y: float
    similarity: float
    specificity: float
    is_query: bool


@dataclass
class NetworkEdge:
    source: int
    target: int
    weight: float


@dataclass
class ContextNetwork:
    """Positioned, typed, scored nodes plus weighted edges; the unit the UI renders."""

    nodes: list[NetworkNode]
    edges: list[NetworkEdge]
    stress: float
    query: ParsedQuery | None = None
    dims: int = 0
    k_display: int = 0
    k_candidates: int = 0


def mds_2d(distances: np.ndarray) -> np.ndarray:
    """Classical MDS: embed a symmetric distance matrix into the plane.

    Double-centers the squared distances, takes the top two eigenpairs, and
    scales eigenvectors by sqrt(eigenvalue); a negative eigenvalue zeroes its
    axis. Each axis is oriented so its largest-magnitude coordinate is
    positive, which pins the reflection for simple spectra.
    """
    D = np.asarray(distances, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise DegenerateInputError(f"distance matrix must be square, got {D.shape}")
    n = D.shape[0]
    if n == 0:
        raise DegenerateInputError("empty distance matrix")
    if not np.allclose(D, D.T, atol=1e-8):
        raise DegenerateInputError("distance matrix is not symmetric")
    if np.any(D < 0):
        raise DegenerateInputError("distances must be non-negative")
    if np.any(np.abs(np.diag(D)) > 1e-9):
        raise DegenerateInputError("distance matrix diagonal must be zero")
    if n == 1:
        return np.zeros((1, 2))

    J = np.eye(n) - np.full((n, n), 1.0 / n)
    B = -0.5 * J @ (D * D) @ J
    evals, evecs = np.linalg.eigh((B + B.T) / 2.0)
    top = np.argsort(evals)[::-1][:2]
    coords = np.zeros((n, 2))
    for axis, k in enumerate(top):
        lam = evals[k]
        if lam > 0:
            coords[:, axis] = evecs[:, k] * np.sqrt(lam)
    for axis in range(2):
        col = coords[:, axis]
        peak = int(np.argmax(np.abs(col)))
        if col[peak] < 0:
            coords[:, axis] = -col
    return coords


def mds_stress(distances: np.ndarray, coords: np.ndarray) -> float:
    """Relative residual between input distances and layout distances."""
    D = np.asarray(distances, dtype=np.float64)
    diff = coords[:, None, :] - coords[None, :, :]
    layout_d = np.sqrt((diff * diff).sum(axis=2))
    iu = np.triu_indices(D.shape[0], k=1)
    denom = float((D[iu] ** 2).sum())
    if denom == 0.0:
        return 0.0
    return float(np.sqrt(((D[iu] - layout_d[iu]) ** 2).sum() / denom))


def build_network(
    ranked: Sequence[ScoredEntity],
    query_scored: Sequence[ScoredEntity],
    index: SemanticIndex,
    edges_per_node: int = DEFAULT_EDGES_PER_NODE,
) -> ContextNetwork:
    """Assemble the displayed graph: query nodes first, then the ranked entities.

    Pairwise cosine feeds both the MDS distances (1 - s) and the edge weights.
    Every node links to its edges_per_node most similar co-displayed nodes and
    every non-query node additionally links to its closest query node, so the
    query anchors a connected picture.
    """
    query_rows = {s.row for s in query_scored}
    scored = list(query_scored) + [r for r in ranked if r.row not in query_rows]
    if not scored:
        return ContextNetwork(nodes=[], edges=[], stress=0.0)
    n = len(scored)
    n_query = len(query_scored)

    rows = np.array([s.row for s in scored])
    units = index.matrix[rows].astype(np.float64) / index.norms[rows].astype(np.float64)[:, None]
    sims = np.clip(units @ units.T, -1.0, 1.0)
    sims = (sims + sims.T) / 2.0
    D = np.clip(1.0 - sims, 0.0, 2.0)
    np.fill_diagonal(D, 0.0)
    coords = mds_2d(D)

    pairs: set[tuple[int, int]] = set()
    if n > 1:
        order_key = -sims + np.eye(n) * 4.0  # self last
        for i in range(n):
            for j in np.argsort(order_key[i], kind="stable")[:edges_per_node]:
                j = int(j)
                if j != i:
                    pairs.add((min(i, j), max(i, j)))
        if n_query:
            for i in range(n_query, n):
                q = int(np.argmax(sims[i, :n_query]))
                pairs.add((min(i, q), max(i, q)))

    nodes = [
        NetworkNode(
            entity=s.entity,
            label=s.entity.key,
            x=float(coords[i, 0]),
            y=float(coords[i, 1]),
            similarity=float(s.similarity),
            specificity=float(s.specificity if s.specificity is not None else 0.0),
            is_query=i < n_query,
        )
        for i, s in enumerate(scored)
    ]
    edges = [
        NetworkEdge(source=a, target=b, weight=float(sims[a, b]))
        for a, b in sorted(pairs)
    ]
    return ContextNetwork(nodes=nodes, edges=edges, stress=mds_stress(D, coords))
