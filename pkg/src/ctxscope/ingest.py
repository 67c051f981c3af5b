"""Corpus ingestion: record parsing, tokenization, vocabulary, occurrence events.

Records arrive as JSON lines with fields id/title/abstract/authors/issn/dewey
(unknown fields ignored). Tokenization lowercases, strips punctuation, drops
stop words and one-character tokens, and adds two-word phrases over the
surviving tokens. Each record then yields one occurrence event per distinct
entity it mentions, carrying the record's in-vocabulary term profile.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

from .errors import EmptyCorpusError
from .index import KIND_AUTHOR, KIND_DEWEY, KIND_JOURNAL, KIND_TERM, EntityId

MIN_TOKEN_LEN = 2

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class ArticleRecord:
    """One bibliographic record as read from the corpus."""

    id: str
    title: str = ""
    abstract: str = ""
    authors: tuple[str, ...] = ()
    issn: str | None = None
    dewey: str | None = None


@dataclass
class Vocabulary:
    """Ordered context-term table: most frequent first, ties lexicographic.

    Carries the stop word set it was built with so later tokenization (event
    extraction, query parsing) forms the same phrases.
    """

    terms: list[str]
    term_index: dict[str, int]
    stopwords: frozenset[str] = frozenset()

    @property
    def size(self) -> int:
        return len(self.terms)


@dataclass
class OccurrenceEvent:
    """One entity seen in one record, with the record's in-vocabulary term counts."""

    doc_id: str
    entity: EntityId
    cooccurring_terms: list[tuple[int, int]] = field(default_factory=list)


def tokenize(text: str, stopwords: frozenset[str] | set[str]) -> list[str]:
    """Lowercased unigrams plus two-word phrases over adjacent surviving tokens.

    Punctuation is stripped, stop words and tokens shorter than two characters
    dropped. Phrases pair tokens that are adjacent after filtering, in the
    original order.
    """
    words = _WORD_RE.findall(text.lower())
    kept = [w for w in words if len(w) >= MIN_TOKEN_LEN and w not in stopwords]
    return kept + [f"{a} {b}" for a, b in zip(kept, kept[1:])]


def normalize_name(raw: str) -> str:
    """Canonical entity key: lowercase with runs of whitespace collapsed."""
    return " ".join(raw.split()).lower()


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Read a stop word file (one token per line, # comments); None loads the shipped list."""
    if path is None:
        text = resources.files("ctxscope.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        tok = line.split("#", 1)[0].strip().lower()
        if tok:
            words.add(tok)
    return frozenset(words)


def record_tokens(record: ArticleRecord, stopwords) -> list[str]:
    """All tokens of a record; title and abstract tokenized separately so no phrase spans the boundary."""
    return tokenize(record.title, stopwords) + tokenize(record.abstract, stopwords)


def parse_record(obj: dict) -> ArticleRecord | None:
    """Validate one decoded JSON object; None if it cannot be used as a record."""
    rec_id = obj.get("id")
    if not isinstance(rec_id, str) or not rec_id:
        return None
    title = obj.get("title") or ""
    abstract = obj.get("abstract") or ""
    if not isinstance(title, str) or not isinstance(abstract, str):
        return None
    authors = obj.get("authors") or []
    if not isinstance(authors, (list, tuple)):
        return None
    issn = obj.get("issn")
    dewey = obj.get("dewey")
    return ArticleRecord(
        id=rec_id,
        title=title,
        abstract=abstract,
        authors=tuple(str(a) for a in authors),
        issn=str(issn) if issn else None,
        dewey=str(dewey) if dewey else None,
    )


@dataclass
class CorpusCounts:
    records_read: int = 0
    records_skipped: int = 0


def iter_jsonl(
    path: str | Path, counts: CorpusCounts | None = None
) -> Iterator[ArticleRecord]:
    """Stream records from a JSON-lines corpus file.

    Malformed lines, records without a usable id, and duplicate ids are
    skipped (and counted when a CorpusCounts is passed) so one bad export
    line cannot sink a long ingest.
    """
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                if counts:
                    counts.records_skipped += 1
                continue
            rec = parse_record(obj) if isinstance(obj, dict) else None
            if rec is None or rec.id in seen:
                if counts:
                    counts.records_skipped += 1
                continue
            seen.add(rec.id)
            if counts:
                counts.records_read += 1
            yield rec


def build_vocabulary(
    corpus: Iterable[ArticleRecord], max_terms: int, stopwords
) -> Vocabulary:
    """Select the max_terms terms with highest document frequency.

    Ordering is deterministic: descending document frequency, ties broken
    lexicographically. Document frequency (one per record) is used rather
    than raw occurrence counts so a single verbose abstract cannot dominate.
    """
    if max_terms < 1:
        raise ValueError(f"max_terms must be >= 1, got {max_terms}")
    df: Counter[str] = Counter()
    for record in corpus:
        df.update(set(record_tokens(record, stopwords)))
    if not df:
        raise EmptyCorpusError("no record in the corpus produced any token")
    ranked = sorted(df.items(), key=lambda kv: (-kv[1], kv[0]))[:max_terms]
    terms = [t for t, _ in ranked]
    return Vocabulary(
        terms=terms,
        term_index={t: i for i, t in enumerate(terms)},
        stopwords=frozenset(stopwords),
    )


def extract_entities(record: ArticleRecord, vocab: Vocabulary) -> list[OccurrenceEvent]:
    """One event per distinct entity in the record.

    Term entities come first in document order, then authors, journal (ISSN),
    and Dewey class. Every event carries the record's full in-vocabulary term
    profile, except that a term entity's own occurrences are removed from its
    profile so its vector is not dominated by its own diagonal.
    """
    in_vocab = [t for t in record_tokens(record, vocab.stopwords) if t in vocab.term_index]
    doc_counts = Counter(in_vocab)
    profile = sorted((vocab.term_index[t], c) for t, c in doc_counts.items())

    events: list[OccurrenceEvent] = []
    for term in dict.fromkeys(in_vocab):
        own = vocab.term_index[term]
        events.append(
            OccurrenceEvent(
                doc_id=record.id,
                entity=EntityId(KIND_TERM, term),
                cooccurring_terms=[(t, c) for t, c in profile if t != own],
            )
        )
    for author in dict.fromkeys(normalize_name(a) for a in record.authors):
        if author:
            events.append(
                OccurrenceEvent(record.id, EntityId(KIND_AUTHOR, author), list(profile))
            )
    if record.issn and normalize_name(record.issn):
        events.append(
            OccurrenceEvent(
                record.id, EntityId(KIND_JOURNAL, normalize_name(record.issn)), list(profile)
            )
        )
    if record.dewey and normalize_name(record.dewey):
        events.append(
            OccurrenceEvent(
                record.id, EntityId(KIND_DEWEY, normalize_name(record.dewey)), list(profile)
            )
        )
    return events


def iter_events(
    corpus: Iterable[ArticleRecord], vocab: Vocabulary
) -> Iterator[OccurrenceEvent]:
    """Event stream for a whole corpus, in deterministic record order."""
    for record in corpus:
        yield from extract_entities(record, vocab)
