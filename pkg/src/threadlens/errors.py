"""Exception types shared across the pipeline."""


class ThreadLensError(Exception):
    """Base class for all errors raised by this package."""


# --- ingest ---------------------------------------------------------------

class MalformedListing(ThreadLensError):
    """A listing document is missing required fields or is structurally broken."""


class OrphanComment(ThreadLensError):
    """A comment's parent id resolves to nothing (raised only in strict mode)."""


class DuplicateId(ThreadLensError):
    """Two records in one listing carry the same id."""


class InvalidConfig(ThreadLensError):
    """A synthetic-corpus config is out of range (negative counts, width <= 0, ...)."""


class AuthFailure(ThreadLensError):
    """The provider rejected our credentials."""


class RateLimited(ThreadLensError):
    """Provider rate limit still in effect after the retry budget was spent."""


class ProviderUnavailable(ThreadLensError):
    """Provider unreachable or persistently failing after retries."""


# --- scoring --------------------------------------------------------------

class EmptyBody(ThreadLensError):
    """Remote scorer was asked to score an empty body."""


class ProviderError(ThreadLensError):
    """Remote scorer returned an unusable response."""

    def __init__(self, message: str, comment_id: str | None = None):
        super().__init__(message if comment_id is None else f"{message} (comment {comment_id})")
        self.comment_id = comment_id


class QuotaExceeded(ThreadLensError):
    """Scoring quota exhausted after the retry budget was spent."""


# --- analytics ------------------------------------------------------------

class UnscoredComment(ThreadLensError):
    """Classification asked for a non-tombstone comment that has no toxicity."""


class InvalidBinCount(ThreadLensError):
    """Temporal series requested with bins < 1."""


class EmptyCorpus(ThreadLensError):
    """Score histogram requested for a corpus with no comments (range undefined)."""


class UnknownTlc(ThreadLensError):
    """The requested id is not a top-level comment of the thread."""


# --- server ---------------------------------------------------------------

class CorpusNotLoaded(ThreadLensError):
    """An endpoint was hit before any corpus snapshot was loaded."""


class UnknownPost(ThreadLensError):
    """No post with the requested id in the loaded corpus."""


class UnknownComment(ThreadLensError):
    """No comment with the requested id in the loaded corpus."""


class StorageFailure(ThreadLensError):
    """The moderation action log could not be written."""


class SchemaMismatch(ThreadLensError):
    """Corpus cache file carries an unsupported schema_version."""


class CorruptCache(ThreadLensError):
    """Corpus cache file failed to parse or violates tree invariants."""
