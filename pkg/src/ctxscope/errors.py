"""Exception types shared across the package."""


class ContextScopeError(Exception):
    """Base class for all ctxscope errors."""


class EmptyCorpusError(ContextScopeError):
    """No record in the corpus produced a single token."""


class IndexOutOfRangeError(ContextScopeError, IndexError):
    """A term column index fell outside the configured vocabulary."""


class UnknownEntityError(ContextScopeError, KeyError):
    """The requested entity has no row in the semantic index."""


class InactiveEntityError(ContextScopeError):
    """The entity exists but has a zero vector and is excluded from search."""


class SampleTooSmallError(ContextScopeError):
    """Background sampling needs at least two active entities."""


class CorruptIndexError(ContextScopeError):
    """Index file failed magic, checksum, or structural validation."""


class VersionMismatchError(ContextScopeError):
    """Index file was written by an incompatible format version."""


class EmptyQueryError(ContextScopeError):
    """No query token resolved to an entity in the index.

    Carries the raw query and the list of ignored tokens so callers can
    surface them to the user instead of crashing.
    """

    def __init__(self, raw: str, unresolved: list[str]):
        super().__init__(f"no entity in the index matches query {raw!r}")
        self.raw = raw
        self.unresolved = unresolved


class NoSignalError(ContextScopeError):
    """The averaged query vector is zero (entity vectors cancelled out)."""


class DegenerateInputError(ContextScopeError, ValueError):
    """Layout input is unusable (empty or malformed distance matrix)."""
