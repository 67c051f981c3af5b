"""The semantic index: entity table, reduced matrix, background stats, persistence.

The index is immutable once built. Background statistics give each entity the
mean/stdev of its cosine similarity against a seeded sample of the index,
which the query-time specificity filter standardizes against to discard hub
entities that are close to everything.

On-disk layout (all little-endian):

    magic "CTXS" | version u16
    dims u32 | seed u64 | vocab_size u64 | entity_count u64 | bg_sample u32
    per entity: kind u8, key_len u32, key utf-8, norm f32, mu f32, sigma f32, active u8
    matrix: entity_count x dims float32, row-major
    crc32 u32 over everything preceding
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    CorruptIndexError,
    InactiveEntityError,
    SampleTooSmallError,
    UnknownEntityError,
    VersionMismatchError,
)
from .projector import ProjectedRow, ProjectorConfig, finalize

MAGIC = b"CTXS"
FORMAT_VERSION = 1

KIND_TERM = "term"
KIND_AUTHOR = "author"
KIND_JOURNAL = "journal"
KIND_DEWEY = "dewey"
KINDS = (KIND_TERM, KIND_AUTHOR, KIND_JOURNAL, KIND_DEWEY)
_KIND_CODE = {k: i for i, k in enumerate(KINDS)}

SIGMA_FLOOR = 1e-6
DEFAULT_BACKGROUND_SAMPLE = 10_000

_HEADER = struct.Struct("<4sHIQQQI")  # magic, version, dims, seed, vocab, entities, bg sample
_ENTITY_FIXED = struct.Struct("<fffB")  # norm, mu, sigma, active


class EntityId(NamedTuple):
    """Typed key of one semantic-matrix row: (kind, normalized key)."""

    kind: str
    key: str


class IndexHeader(NamedTuple):
    version: int
    dims: int
    seed: int
    vocab_size: int
    entity_count: int
    background_sample_size: int


@dataclass
class BackgroundStats:
    """Per-entity mean/stdev of cosine similarity against a seeded entity sample."""

    sample_size: int
    mu: np.ndarray  # float32, one per entity
    sigma: np.ndarray  # float32, one per entity


@dataclass
class SemanticIndex:
    """Finalized entity matrix plus lookup tables; immutable after construction."""

    config: ProjectorConfig
    entities: list[EntityId]
    matrix: np.ndarray  # (n, dims) float32
    norms: np.ndarray  # (n,) float32
    mu: np.ndarray  # (n,) float32
    sigma: np.ndarray  # (n,) float32
    active: np.ndarray  # (n,) bool
    background_sample_size: int
    _pos: dict = field(init=False, repr=False)
    _kind_codes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.entities)
        for name in ("matrix", "norms", "mu", "sigma", "active"):
            if getattr(self, name).shape[0] != n:
                raise ValueError(f"{name} length does not match entity table ({n})")
        self._pos = {e: i for i, e in enumerate(self.entities)}
        if len(self._pos) != n:
            raise ValueError("duplicate entity in table")
        self._kind_codes = np.array(
            [_KIND_CODE[e.kind] for e in self.entities], dtype=np.uint8
        )

    def __len__(self):
        return len(self.entities)

    def __contains__(self, entity: EntityId) -> bool:
        return entity in self._pos

    def row_index(self, entity: EntityId) -> int:
        try:
            return self._pos[entity]
        except KeyError:
            raise UnknownEntityError(f"{entity.kind}:{entity.key}") from None

    def unit_row(self, i: int) -> np.ndarray:
        """Row i scaled to unit length, float64."""
        return self.matrix[i].astype(np.float64) / float(self.norms[i])

    def counts_by_kind(self) -> dict[str, int]:
        return {k: int(np.sum(self._kind_codes == _KIND_CODE[k])) for k in KINDS}

    def kind_mask(self, kinds) -> np.ndarray:
        """Boolean row mask for a set of entity kinds (None means all)."""
        if kinds is None:
            return np.ones(len(self.entities), dtype=bool)
        codes = [_KIND_CODE[k] for k in kinds]
        return np.isin(self._kind_codes, codes)

    @property
    def background(self) -> BackgroundStats:
        return BackgroundStats(self.background_sample_size, self.mu, self.sigma)


def cosine(index: SemanticIndex, a: EntityId, b: EntityId) -> float:
    """Cosine similarity between two active entities, clipped to [-1, 1].

    Cross-type pairs are fine: every entity lives in the same reduced space.
    """
    i, j = index.row_index(a), index.row_index(b)
    for e, r in ((a, i), (b, j)):
        if not index.active[r]:
            raise InactiveEntityError(f"{e.kind}:{e.key} has a zero vector")
    # canonical row order keeps the arithmetic identical for (a,b) and (b,a)
    i, j = min(i, j), max(i, j)
    dot = float(np.dot(index.matrix[i].astype(np.float64), index.matrix[j].astype(np.float64)))
    sim = dot / (float(index.norms[i]) * float(index.norms[j]))
    return float(min(1.0, max(-1.0, sim)))


def compute_background(
    index: SemanticIndex, sample_size: int, seed: int
) -> BackgroundStats:
    """Mean/stdev of each active entity's cosine against a seeded entity sample.

    Sample members exclude the entity itself; stdev uses the unbiased (n-1)
    estimator; active entities get a floor of SIGMA_FLOOR so the downstream
    filter never divides by zero. Inactive entities get mu = sigma = 0.
    """
    active_rows = np.flatnonzero(index.active)
    if sample_size < 2 or sample_size > len(active_rows):
        raise SampleTooSmallError(
            f"need 2 <= sample_size <= {len(active_rows)} active entities, got {sample_size}"
        )
    rng = np.random.default_rng(seed)
    sample = np.sort(rng.choice(active_rows, size=sample_size, replace=False))
    sample_units = (
        index.matrix[sample].astype(np.float64)
        / index.norms[sample].astype(np.float64)[:, None]
    ).astype(np.float32)

    n = len(index.entities)
    mu = np.zeros(n, dtype=np.float32)
    sigma = np.zeros(n, dtype=np.float32)
    in_sample_col = {int(r): j for j, r in enumerate(sample)}

    block = 2048
    for start in range(0, len(active_rows), block):
        rows = active_rows[start : start + block]
        units = (
            index.matrix[rows].astype(np.float64)
            / index.norms[rows].astype(np.float64)[:, None]
        ).astype(np.float32)
        sims = (units @ sample_units.T).astype(np.float64)
        sums = sims.sum(axis=1)
        sumsq = (sims * sims).sum(axis=1)
        counts = np.full(len(rows), sample_size, dtype=np.float64)
        for local, r in enumerate(rows):
            j = in_sample_col.get(int(r))
            if j is not None:
                own = sims[local, j]
                sums[local] -= own
                sumsq[local] -= own * own
                counts[local] -= 1
        means = sums / counts
        var = np.zeros_like(means)
        multi = counts > 1
        var[multi] = np.maximum(
            0.0, (sumsq[multi] - counts[multi] * means[multi] ** 2) / (counts[multi] - 1)
        )
        mu[rows] = means.astype(np.float32)
        sigma[rows] = np.maximum(np.sqrt(var), SIGMA_FLOOR).astype(np.float32)
    return BackgroundStats(sample_size, mu, sigma)


def _assemble(
    config: ProjectorConfig,
    entities: Sequence[EntityId],
    matrix: np.ndarray,
    norms: np.ndarray,
    active: np.ndarray,
    background_sample: int,
    background_seed: int,
) -> SemanticIndex:
    index = SemanticIndex(
        config=config,
        entities=list(entities),
        matrix=matrix,
        norms=norms,
        mu=np.zeros(len(entities), dtype=np.float32),
        sigma=np.zeros(len(entities), dtype=np.float32),
        active=active,
        background_sample_size=0,
    )
    n_active = int(active.sum())
    size = min(background_sample, n_active)
    if size >= 2:
        stats = compute_background(index, size, background_seed)
        index.mu = stats.mu
        index.sigma = stats.sigma
        index.background_sample_size = size
    return index


def from_projection(
    config: ProjectorConfig,
    rows: Sequence[ProjectedRow],
    background_sample: int = DEFAULT_BACKGROUND_SAMPLE,
    background_seed: int | None = None,
) -> SemanticIndex:
    """Finalize accumulated integer rows into a searchable index."""
    matrix, norms, active = finalize(rows)
    if matrix.shape[0] and matrix.shape[1] != config.dims:
        raise ValueError("row width does not match config dims")
    entities = [r.entity for r in rows]
    seed = config.seed if background_seed is None else background_seed
    return _assemble(config, entities, matrix, norms, active, background_sample, seed)


def from_matrix(
    config: ProjectorConfig,
    entities: Sequence[EntityId],
    matrix: np.ndarray,
    background_sample: int = DEFAULT_BACKGROUND_SAMPLE,
    background_seed: int | None = None,
) -> SemanticIndex:
    """Build an index straight from a float matrix (synthetic fixtures, tests)."""
    matrix = np.ascontiguousarray(matrix, dtype=np.float32)
    norms = np.linalg.norm(matrix.astype(np.float64), axis=1).astype(np.float32)
    active = norms > 0.0
    seed = config.seed if background_seed is None else background_seed
    return _assemble(config, entities, matrix, norms, active, background_sample, seed)


def save(index: SemanticIndex, path: str | Path) -> None:
    """Write the index; byte-for-byte deterministic for identical contents."""
    out = bytearray()
    out += _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        index.config.dims,
        index.config.seed,
        index.config.vocab_size,
        len(index.entities),
        index.background_sample_size,
    )
    for i, e in enumerate(index.entities):
        key = e.key.encode("utf-8")
        out += struct.pack("<BI", _KIND_CODE[e.kind], len(key))
        out += key
        out += _ENTITY_FIXED.pack(
            float(index.norms[i]),
            float(index.mu[i]),
            float(index.sigma[i]),
            1 if index.active[i] else 0,
        )
    out += np.ascontiguousarray(index.matrix, dtype="<f4").tobytes()
    out += struct.pack("<I", zlib.crc32(bytes(out)) & 0xFFFFFFFF)
    Path(path).write_bytes(bytes(out))


def inspect_header(path: str | Path) -> IndexHeader:
    """Read dims/seed/entity counts from the fixed-size header without touching the matrix."""
    with open(path, "rb") as f:
        head = f.read(_HEADER.size)
    if len(head) < _HEADER.size:
        raise CorruptIndexError(f"{path}: truncated header")
    magic, version, dims, seed, vocab, count, bg = _HEADER.unpack(head)
    if magic != MAGIC:
        raise CorruptIndexError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    return IndexHeader(version, dims, seed, vocab, count, bg)


def load(path: str | Path) -> SemanticIndex:
    """Read and validate an index file (magic, version, CRC32)."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size + 4:
        raise CorruptIndexError(f"{path}: file too short")
    magic, version, dims, seed, vocab, count, bg = _HEADER.unpack(data[: _HEADER.size])
    if magic != MAGIC:
        raise CorruptIndexError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    (stored_crc,) = struct.unpack("<I", data[-4:])
    if zlib.crc32(data[:-4]) & 0xFFFFFFFF != stored_crc:
        raise CorruptIndexError(f"{path}: checksum mismatch")

    off = _HEADER.size
    entities: list[EntityId] = []
    norms = np.empty(count, dtype=np.float32)
    mu = np.empty(count, dtype=np.float32)
    sigma = np.empty(count, dtype=np.float32)
    active = np.empty(count, dtype=bool)
    try:
        for i in range(count):
            kind_code, key_len = struct.unpack_from("<BI", data, off)
            off += 5
            key = data[off : off + key_len].decode("utf-8")
            off += key_len
            norms[i], mu[i], sigma[i], flag = _ENTITY_FIXED.unpack_from(data, off)
            off += _ENTITY_FIXED.size
            entities.append(EntityId(KINDS[kind_code], key))
            active[i] = bool(flag)
    except (struct.error, IndexError, UnicodeDecodeError) as exc:
        raise CorruptIndexError(f"{path}: malformed entity table: {exc}") from None
    matrix_bytes = count * dims * 4
    if off + matrix_bytes + 4 != len(data):
        raise CorruptIndexError(f"{path}: unexpected file size")
    matrix = np.frombuffer(data, dtype="<f4", count=count * dims, offset=off).reshape(
        count, dims
    )
    return SemanticIndex(
        config=ProjectorConfig(seed=seed, dims=dims, vocab_size=vocab),
        entities=entities,
        matrix=matrix,
        norms=norms,
        mu=mu,
        sigma=sigma,
        active=active,
        background_sample_size=bg,
    )
