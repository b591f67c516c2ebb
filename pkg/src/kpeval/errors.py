"""Exception types shared across the toolkit.

Every error raised by kpeval derives from :class:`KpevalError`, so callers
can catch one base class. The CLI maps subgroups to stable exit codes.
"""


class KpevalError(Exception):
    """Base class for all kpeval errors."""


# --- corpus / record errors -------------------------------------------------

class MalformedRecord(KpevalError):
    """A line in a data file could not be parsed or violates an invariant."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateId(KpevalError):
    """Two records in one corpus share a document id."""

    def __init__(self, doc_id: str):
        super().__init__(f"duplicate document id: {doc_id!r}")
        self.doc_id = doc_id


class EmptyCorpus(KpevalError):
    """A corpus file contained no records."""


class EmptyDocument(KpevalError):
    """An extractor was asked to process a document with no usable text."""


class EmptyInput(KpevalError):
    """An aggregation was asked to average an empty list."""


# --- embedding errors -------------------------------------------------------

class DimensionMismatch(KpevalError):
    """Two vectors with different dimensions were combined."""


class ZeroVector(KpevalError):
    """Cosine similarity is undefined for an all-zero vector."""


class TransportError(KpevalError):
    """The remote embedding endpoint could not be reached or failed."""


class ProtocolError(KpevalError):
    """The remote embedding endpoint answered with an invalid payload."""


class MissingEmbedding(KpevalError):
    """A key was looked up in an offline embedding cache and not found."""

    def __init__(self, key: str, mode: str):
        super().__init__(f"no cached {mode} embedding for {key!r}")
        self.key = key
        self.mode = mode


class MalformedCache(KpevalError):
    """An embedding cache file is syntactically or dimensionally inconsistent."""


# --- harness errors ---------------------------------------------------------

class MissingDocument(KpevalError):
    """A prediction file does not cover a test document of the corpus."""

    def __init__(self, doc_id: str):
        super().__init__(f"predictions missing for test document {doc_id!r}")
        self.doc_id = doc_id


class UnknownDocument(KpevalError):
    """A prediction file references a document id absent from the corpus."""

    def __init__(self, doc_id: str):
        super().__init__(f"prediction for unknown document {doc_id!r}")
        self.doc_id = doc_id


class MissingCorpus(KpevalError):
    """A cross-domain run needs a corpus for a domain that was not supplied."""

    def __init__(self, domain: str):
        super().__init__(f"no corpus loaded for domain {domain!r}")
        self.domain = domain
