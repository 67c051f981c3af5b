"""ctxscope: explore the semantic context of bibliographic queries.

Off-line, a corpus of article records is folded into a low-dimensional
semantic matrix by random projection of entity/term co-occurrence counts.
On-line, free-text queries are matched against that matrix and answered with
a small navigable network of the most specifically related entities (terms,
authors, journals, Dewey classes).
"""

from .errors import (
    ContextScopeError,
    CorruptIndexError,
    DegenerateInputError,
    EmptyCorpusError,
    EmptyQueryError,
    InactiveEntityError,
    IndexOutOfRangeError,
    NoSignalError,
    SampleTooSmallError,
    UnknownEntityError,
    VersionMismatchError,
)
from .index import EntityId, SemanticIndex, cosine, load, save
from .ingest import ArticleRecord, Vocabulary, build_vocabulary, load_stopwords, tokenize
from .layout import ContextNetwork, build_network, mds_2d
from .pipeline import build_index, relate
from .projector import ProjectorConfig, projection_row
from .query import ParsedQuery, ScoredEntity, parse_query, rank_by_specificity, top_candidates

__version__ = "0.1.0"

__all__ = [
    "ArticleRecord",
    "ContextNetwork",
    "ContextScopeError",
    "CorruptIndexError",
    "DegenerateInputError",
    "EmptyCorpusError",
    "EmptyQueryError",
    "EntityId",
    "InactiveEntityError",
    "IndexOutOfRangeError",
    "NoSignalError",
    "ParsedQuery",
    "ProjectorConfig",
    "SampleTooSmallError",
    "ScoredEntity",
    "SemanticIndex",
    "UnknownEntityError",
    "VersionMismatchError",
    "Vocabulary",
    "build_index",
    "build_network",
    "build_vocabulary",
    "cosine",
    "load",
    "load_stopwords",
    "mds_2d",
    "parse_query",
    "projection_row",
    "rank_by_specificity",
    "relate",
    "save",
    "tokenize",
    "top_candidates",
]
