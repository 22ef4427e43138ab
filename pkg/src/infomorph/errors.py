"""Engine error taxonomy.

Every error carries a stable machine-readable ``code`` (surfaced by the HTTP
API and the CLI) and an HTTP status used by the service layer.
"""

from __future__ import annotations


class EngineError(Exception):
    code = "engine"
    http_status = 400

    def __init__(self, message: str, *, path: str | None = None):
        super().__init__(message)
        self.path = path


# -- graph-core ---------------------------------------------------------------

class CycleError(EngineError):
    code = "cycle"
    http_status = 422


class KindMismatch(EngineError):
    code = "kind-mismatch"
    http_status = 422


class ArityExceeded(EngineError):
    code = "arity"
    http_status = 422


class NotClean(EngineError):
    code = "not-clean"
    http_status = 409


class ApprovedLocked(EngineError):
    code = "approved"
    http_status = 409


class UnsatisfiedInput(EngineError):
    code = "unsatisfied-input"
    http_status = 409


class UnknownId(EngineError):
    code = "unknown-id"
    http_status = 404


# -- content-model ------------------------------------------------------------

class InvalidContent(EngineError):
    code = "invalid-content"


class BadAddress(EngineError):
    code = "bad-address"
    http_status = 422


class InvariantViolation(EngineError):
    code = "invariant"
    http_status = 422


# -- providers ----------------------------------------------------------------

class ProviderUnavailable(EngineError):
    code = "provider-unavailable"
    http_status = 502


class ContextOverflow(EngineError):
    code = "context-overflow"


class UnsupportedMode(EngineError):
    code = "unsupported-mode"


class MissingBlob(EngineError):
    code = "missing-blob"
    http_status = 404


# -- ingestion ----------------------------------------------------------------

class UnsupportedFormat(EngineError):
    code = "unsupported-format"


class ParseError(EngineError):
    code = "parse-error"

    def __init__(self, message: str, *, page: int | None = None, path: str | None = None):
        super().__init__(message, path=path)
        self.page = page


class FetchError(EngineError):
    code = "fetch-error"

    def __init__(self, status: int, message: str = ""):
        super().__init__(message or f"fetch failed with status {status}")
        self.status = status


class NotText(EngineError):
    code = "not-text"


class NoContent(EngineError):
    code = "no-content"


# -- infomorph operations -----------------------------------------------------

class EmptyInput(EngineError):
    code = "empty-input"


class PlanParseError(EngineError):
    code = "plan-parse"
    http_status = 502


class TemplateInvalid(EngineError):
    code = "template-invalid"
    http_status = 422


class UnresolvedImage(EngineError):
    code = "unresolved-image"
    http_status = 422


class NoRelevantSources(EngineError):
    code = "no-relevant-sources"


# -- persistence --------------------------------------------------------------

class SchemaVersionUnsupported(EngineError):
    code = "schema-version"


class ValidationError(EngineError):
    code = "validation"


class CorruptEntry(EngineError):
    code = "corrupt-entry"
    http_status = 500


# -- warnings -----------------------------------------------------------------

class NoOpWarning(UserWarning):
    """Operation had no effect (e.g. dirtying an approved node)."""


class DanglingRefWarning(UserWarning):
    """A generated reference did not resolve against the operation inputs."""


class IngestWarning(UserWarning):
    """Non-fatal ingestion irregularity (empty body, failed page enrichment)."""
