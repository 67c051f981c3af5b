import numpy as np
import pytest

from ctxscope import fixtures, pipeline
from ctxscope.index import EntityId, from_matrix
from ctxscope.projector import ProjectorConfig


@pytest.fixture(scope="session")
def stopwords():
    from ctxscope.ingest import load_stopwords

    return load_stopwords()


@pytest.fixture(scope="session")
def hand_records():
    return fixtures.hand_corpus()


@pytest.fixture(scope="session")
def hand_index(hand_records):
    """Index over the shipped 20-record corpus (dims kept small for speed)."""
    idx, vocab = pipeline.build_index(hand_records, dims=64, seed=7, background_sample=200)
    return idx, vocab


def random_index(n_entities, dims, seed, background_sample=64, n_inactive=0):
    """Synthetic index over random gaussian rows; optionally some zero rows."""
    rng = np.random.default_rng(seed)
    matrix = rng.standard_normal((n_entities, dims)).astype(np.float32)
    for i in range(n_inactive):
        matrix[n_entities - 1 - i] = 0.0
    entities = [EntityId("term", f"e{i:05d}") for i in range(n_entities)]
    config = ProjectorConfig(seed=seed, dims=dims, vocab_size=max(2 * dims, n_entities))
    return from_matrix(config, entities, matrix, background_sample=background_sample)


def hub_index(dims=64, seed=3, n_clusters=8, tight_per_cluster=15, loose_in_first=10):
    """Clustered index with one planted hub row that is similar to everything.

    Clusters sit on orthonormal directions with per-member noise. Cluster 0
    additionally has loose members (heavy noise, hence low similarity to a
    cluster-0 query but also near-zero background). The hub points at the
    mean of all cluster directions, so its cosine to a cluster-0 query beats
    the loose members while its background similarity is equally high —
    exactly the profile the specificity filter is meant to discard.

    Returns (index, query_entity, hub_entity).
    """
    rng = np.random.default_rng(seed)
    basis, _ = np.linalg.qr(rng.standard_normal((dims, n_clusters)))
    directions = basis.T  # orthonormal cluster directions

    rows, entities = [], []
    for c in range(n_clusters):
        noise_levels = np.linspace(0.3, 1.0, tight_per_cluster)
        if c == 0:
            noise_levels = np.concatenate(
                [noise_levels, np.linspace(3.0, 4.0, loose_in_first)]
            )
        for i, b in enumerate(noise_levels):
            eps = rng.standard_normal(dims)
            eps /= np.linalg.norm(eps)
            rows.append(directions[c] + b * eps)
            entities.append(EntityId("term", f"c{c}e{i:02d}"))
    hub_dir = directions.sum(axis=0)
    hub_dir /= np.linalg.norm(hub_dir)
    eps = rng.standard_normal(dims)
    rows.append(hub_dir + 0.05 * eps / np.linalg.norm(eps))
    entities.append(EntityId("term", "hub0"))

    matrix = np.array(rows, dtype=np.float32)
    config = ProjectorConfig(seed=seed, dims=dims, vocab_size=4 * dims)
    idx = from_matrix(config, entities, matrix, background_sample=len(entities))
    return idx, EntityId("term", "c0e00"), EntityId("term", "hub0")
