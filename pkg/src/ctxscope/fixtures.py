"""Deterministic synthetic corpora with planted topic structure.

Each topic owns disjoint term and author pools; documents draw from one
topic's pools and stray across topics at a configurable mixing rate. Queries
on a topic term should therefore rank same-topic entities above cross-topic
ones, which is what the recovery tests assert. A small hand-written corpus
ships with the package for exact-count tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .ingest import ArticleRecord, parse_record


@dataclass(frozen=True)
class SyntheticCorpusSpec:
    seed: int = 0
    n_docs: int = 100
    n_topics: int = 4
    terms_per_topic: int = 12
    authors_per_topic: int = 4
    journals: int = 8
    mixing: float = 0.1

    def __post_init__(self):
        for name in ("n_docs", "n_topics", "terms_per_topic", "authors_per_topic", "journals"):
            if getattr(self, name) < (0 if name == "n_docs" else 1):
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.mixing <= 1.0:
            raise ValueError(f"mixing must be in [0, 1], got {self.mixing}")


def topic_terms(spec: SyntheticCorpusSpec, topic: int) -> list[str]:
    return [f"t{topic:02d}w{i:03d}" for i in range(spec.terms_per_topic)]


def topic_authors(spec: SyntheticCorpusSpec, topic: int) -> list[str]:
    return [f"au{topic:02d}n{i:02d}" for i in range(spec.authors_per_topic)]


def journal_issn(j: int) -> str:
    return f"{1000 + j:04d}-{(j * 37) % 10000:04d}"


def journal_dewey(j: int) -> str:
    return f"{(j * 13) % 1000:03d}"


def generate(spec: SyntheticCorpusSpec) -> Iterator[ArticleRecord]:
    """Planted-topic record stream, fully determined by its parameters."""
    rng = np.random.default_rng(spec.seed)
    terms = [topic_terms(spec, t) for t in range(spec.n_topics)]
    authors = [topic_authors(spec, t) for t in range(spec.n_topics)]
    topic_journals = [
        [j for j in range(spec.journals) if j % spec.n_topics == t] or list(range(spec.journals))
        for t in range(spec.n_topics)
    ]

    def pick_word(topic: int) -> str:
        t = topic
        if spec.n_topics > 1 and rng.random() < spec.mixing:
            t = int(rng.integers(spec.n_topics - 1))
            if t >= topic:
                t += 1
        pool = terms[t]
        return pool[int(rng.integers(len(pool)))]

    for i in range(spec.n_docs):
        topic = int(rng.integers(spec.n_topics))
        title = " ".join(pick_word(topic) for _ in range(int(rng.integers(3, 7))))
        abstract = " ".join(pick_word(topic) for _ in range(int(rng.integers(8, 21))))
        n_authors = int(rng.integers(1, 3))
        pool = authors[topic]
        picked = rng.choice(len(pool), size=min(n_authors, len(pool)), replace=False)
        doc_authors = tuple(pool[int(a)] for a in sorted(picked))
        j = topic_journals[topic][int(rng.integers(len(topic_journals[topic])))]
        yield ArticleRecord(
            id=f"doc-{i:05d}",
            title=title,
            abstract=abstract,
            authors=doc_authors,
            issn=journal_issn(j),
            dewey=journal_dewey(j),
        )


def write_jsonl(records: Iterable[ArticleRecord], path: str | Path) -> int:
    """Dump records in the ingest JSON-lines schema; returns the record count."""
    n = 0
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(
                json.dumps(
                    {
                        "id": r.id,
                        "title": r.title,
                        "abstract": r.abstract,
                        "authors": list(r.authors),
                        "issn": r.issn,
                        "dewey": r.dewey,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
            n += 1
    return n


def hand_corpus() -> list[ArticleRecord]:
    """The shipped 20-record corpus used by the exact-oracle tests."""
    text = resources.files("ctxscope.data").joinpath("hand_corpus.jsonl").read_text("utf-8")
    records = []
    for line in text.splitlines():
        if line.strip():
            rec = parse_record(json.loads(line))
            assert rec is not None
            records.append(rec)
    return records
