"""Cosine, background statistics, and the on-disk index format."""

import struct

import numpy as np
import pytest

from ctxscope.errors import (
    CorruptIndexError,
    InactiveEntityError,
    SampleTooSmallError,
    UnknownEntityError,
    VersionMismatchError,
)
from ctxscope.index import (
    EntityId,
    SIGMA_FLOOR,
    compute_background,
    cosine,
    from_matrix,
    inspect_header,
    load,
    save,
)
from ctxscope.projector import ProjectorConfig
from conftest import random_index
from oracles import reference_cosine


def _tiny_index(matrix, seed=0, background_sample=0):
    matrix = np.asarray(matrix, dtype=np.float32)
    entities = [EntityId("term", f"t{i}") for i in range(matrix.shape[0])]
    config = ProjectorConfig(seed=seed, dims=matrix.shape[1], vocab_size=matrix.shape[1] * 4)
    return from_matrix(config, entities, matrix, background_sample=background_sample)


def test_cosine_self_similarity():
    idx = random_index(50, 16, seed=1, background_sample=8)
    for e in idx.entities[:10]:
        assert cosine(idx, e, e) == pytest.approx(1.0, abs=1e-6)


def test_cosine_orthogonal_rows():
    m = np.zeros((2, 8), dtype=np.float32)
    m[0, 0] = 1.0
    m[1, 1] = 1.0
    idx = _tiny_index(m)
    assert cosine(idx, idx.entities[0], idx.entities[1]) == 0.0


def test_cosine_symmetry_exact():
    idx = random_index(40, 32, seed=2, background_sample=8)
    for i in range(0, 40, 7):
        for j in range(1, 40, 11):
            a, b = idx.entities[i], idx.entities[j]
            assert cosine(idx, a, b) == cosine(idx, b, a)


def test_cosine_matches_reference(hand_index):
    idx, _ = hand_index
    rng = np.random.default_rng(0)
    rows = rng.choice(np.flatnonzero(idx.active), size=30, replace=False)
    for i in rows[:15]:
        for j in rows[15:]:
            got = cosine(idx, idx.entities[int(i)], idx.entities[int(j)])
            want = reference_cosine(idx.matrix[int(i)], idx.matrix[int(j)])
            assert got == pytest.approx(want, abs=1e-5)


def test_cosine_error_cases():
    m = np.zeros((2, 8), dtype=np.float32)
    m[0, 0] = 1.0
    idx = _tiny_index(m)
    with pytest.raises(InactiveEntityError):
        cosine(idx, idx.entities[0], idx.entities[1])
    with pytest.raises(UnknownEntityError):
        cosine(idx, idx.entities[0], EntityId("term", "missing"))


def test_cosine_scale_invariance():
    rng = np.random.default_rng(3)
    base = rng.standard_normal((20, 16)).astype(np.float32)
    scaled = base.copy()
    scaled[5] *= 37.0
    scaled[11] *= 0.004
    a, b = _tiny_index(base), _tiny_index(scaled)
    for i in range(20):
        for j in range(i + 1, 20):
            assert cosine(a, a.entities[i], a.entities[j]) == pytest.approx(
                cosine(b, b.entities[i], b.entities[j]), abs=1e-6
            )


def test_background_orthogonal_rows_mu_zero():
    idx = _tiny_index(np.eye(16, dtype=np.float32))
    stats = compute_background(idx, sample_size=16, seed=0)
    assert np.allclose(stats.mu, 0.0, atol=1e-7)
    assert np.all(stats.sigma[: 16] >= SIGMA_FLOOR)


def test_background_duplicated_hub_has_higher_mu():
    rng = np.random.default_rng(4)
    hub_row = rng.standard_normal(24)
    rows = np.vstack([np.tile(hub_row, (50, 1)), rng.standard_normal((50, 24))])
    idx = _tiny_index(rows.astype(np.float32))
    stats = compute_background(idx, sample_size=100, seed=1)
    assert stats.mu[:50].min() > stats.mu[50:].max()


def test_background_deterministic():
    idx = random_index(80, 16, seed=5, background_sample=0)
    a = compute_background(idx, 40, seed=9)
    b = compute_background(idx, 40, seed=9)
    assert np.array_equal(a.mu, b.mu) and np.array_equal(a.sigma, b.sigma)


def test_background_sample_bounds():
    idx = random_index(10, 8, seed=6, background_sample=0)
    with pytest.raises(SampleTooSmallError):
        compute_background(idx, 1, seed=0)
    with pytest.raises(SampleTooSmallError):
        compute_background(idx, 11, seed=0)


def test_background_sanity(hand_index):
    idx, _ = hand_index
    assert np.all(idx.mu >= -1.0) and np.all(idx.mu <= 1.0)
    assert np.all(idx.sigma >= 0.0) and np.all(idx.sigma <= 1.0)
    assert np.all(idx.sigma[idx.active] >= SIGMA_FLOOR)


def test_save_load_round_trip(tmp_path):
    idx = random_index(1000, 24, seed=7, background_sample=64, n_inactive=3)
    path = tmp_path / "round.ctxs"
    save(idx, path)
    back = load(path)
    assert back.entities == idx.entities
    assert np.array_equal(back.matrix, idx.matrix)
    assert np.array_equal(back.norms, idx.norms)
    assert np.array_equal(back.mu, idx.mu)
    assert np.array_equal(back.sigma, idx.sigma)
    assert np.array_equal(back.active, idx.active)
    assert back.config == idx.config
    assert back.background_sample_size == idx.background_sample_size
    # saving the loaded copy reproduces the file bit for bit
    path2 = tmp_path / "round2.ctxs"
    save(back, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_load_truncated_file(tmp_path):
    idx = random_index(50, 8, seed=8, background_sample=16)
    path = tmp_path / "t.ctxs"
    save(idx, path)
    blob = path.read_bytes()
    for cut in (10, len(blob) // 2, len(blob) - 1):
        path.write_bytes(blob[:cut])
        with pytest.raises(CorruptIndexError):
            load(path)


def test_load_bad_magic(tmp_path):
    idx = random_index(5, 8, seed=8, background_sample=2)
    path = tmp_path / "m.ctxs"
    save(idx, path)
    blob = bytearray(path.read_bytes())
    blob[:4] = b"NOPE"
    path.write_bytes(bytes(blob))
    with pytest.raises(CorruptIndexError):
        load(path)


def test_load_flipped_byte(tmp_path):
    idx = random_index(5, 8, seed=8, background_sample=2)
    path = tmp_path / "f.ctxs"
    save(idx, path)
    blob = bytearray(path.read_bytes())
    blob[len(blob) // 2] ^= 0xFF
    path.write_bytes(bytes(blob))
    with pytest.raises(CorruptIndexError):
        load(path)


def test_load_version_mismatch(tmp_path):
    idx = random_index(5, 8, seed=8, background_sample=2)
    path = tmp_path / "v.ctxs"
    save(idx, path)
    blob = bytearray(path.read_bytes())
    blob[4:6] = struct.pack("<H", 99)
    path.write_bytes(bytes(blob))
    with pytest.raises(VersionMismatchError):
        load(path)


def test_inspect_header(tmp_path):
    idx = random_index(123, 16, seed=11, background_sample=32)
    path = tmp_path / "h.ctxs"
    save(idx, path)
    header = inspect_header(path)
    assert header.dims == 16
    assert header.seed == 11
    assert header.entity_count == 123
    assert header.vocab_size == idx.config.vocab_size
    assert header.background_sample_size == 32


def test_counts_by_kind(hand_index):
    idx, _ = hand_index
    counts = idx.counts_by_kind()
    assert counts["journal"] == 5
    assert counts["dewey"] == 5
    assert counts["author"] == 21
    assert sum(counts.values()) == len(idx)
