"""Exception hierarchy shared by all dvsm modules.

Every error carries a stable machine-readable ``code`` so the CLI and the
HTTP service can surface identical identifiers.
"""
from __future__ import annotations


class DvsmError(Exception):
    """Base class for all domain errors."""

    code = "DVSM_ERROR"

    def __init__(self, message: str, subject: str | None = None):
        super().__init__(message)
        self.subject = subject

    @property
    def message(self) -> str:
        return str(self)


class InvalidValueError(DvsmError):
    code = "INVALID_VALUE"


class DuplicateIdError(DvsmError):
    code = "DUPLICATE_ID"


class DanglingIdError(DvsmError):
    code = "DANGLING_ID"


class LifespanContainmentError(DvsmError):
    code = "LIFESPAN_CONTAINMENT"


class OwnerMismatchError(DvsmError):
    code = "OWNER_MISMATCH"


class MatrixViolationError(DvsmError):
    code = "MATRIX_VIOLATION"


class CycleError(DvsmError):
    code = "CYCLE"

    def __init__(self, message: str, path: list[str]):
        super().__init__(message, subject=path[0] if path else None)
        self.path = path


class UnknownEventError(DvsmError):
    code = "UNKNOWN_EVENT"


class UnknownActorError(DvsmError):
    code = "UNKNOWN_ACTOR"


class NoOverlapError(DvsmError):
    code = "NO_OVERLAP"


class OutOfSpanError(DvsmError):
    code = "OUT_OF_SPAN"


class EmptyFilterError(DvsmError):
    code = "EMPTY_FILTER"


class ParseError(DvsmError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(DvsmError):
    code = "SCHEMA_ERROR"


class VersionUnsupportedError(DvsmError):
    code = "VERSION_UNSUPPORTED"


class StaleRevisionError(DvsmError):
    code = "STALE_REVISION"

    def __init__(self, message: str, current_revision: int):
        super().__init__(message)
        self.current_revision = current_revision
