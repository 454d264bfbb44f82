"""Exception taxonomy shared across the package.

Every error carries a stable machine-readable ``code`` so the HTTP gateway
and the CLI can map failures to statuses and exit codes without string
matching.
"""

from __future__ import annotations


class PrimcatError(Exception):
    """Base class for all domain errors."""

    code = "INTERNAL"

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.code)
        self.detail = detail or self.code


class SchemaViolationError(PrimcatError):
    """A document failed validation; carries the complete violation list."""

    code = "INVALID_DOCUMENT"

    def __init__(self, violations):
        self.violations = tuple(violations)
        summary = "; ".join(f"{v.code}({v.path})" for v in self.violations)
        super().__init__(f"document rejected: {summary}")


class QueryError(PrimcatError):
    code = "INVALID_QUERY"


class UnknownFieldError(QueryError):
    code = "UNKNOWN_FIELD"


class NotFoundError(PrimcatError):
    code = "NOT_FOUND"


class VersionNotFoundError(NotFoundError):
    code = "VERSION_NOT_FOUND"


class UnknownDatasetError(NotFoundError):
    code = "UNKNOWN_DATASET"


class UnknownTaskError(PrimcatError):
    code = "UNKNOWN_TASK"


class UnknownPrimitiveError(NotFoundError):
    """A pipeline step references a primitive the catalog cannot resolve."""

    code = "UNKNOWN_PRIMITIVE"

    def __init__(self, detail: str = "", step_index: int | None = None):
        super().__init__(detail)
        self.step_index = step_index


class NotApplicableError(PrimcatError):
    code = "NOT_APPLICABLE"


class NoPipelineFoundError(PrimcatError):
    """Planning failed; ``unmet`` holds the condition flags that blocked
    every candidate estimator at every reached state."""

    code = "NO_PIPELINE_FOUND"

    def __init__(self, unmet=frozenset(), detail: str = ""):
        self.unmet = frozenset(unmet)
        flags = ", ".join(sorted(self.unmet)) or "none"
        super().__init__(detail or f"no pipeline found; unmet flags: {flags}")


class InvalidImageRefError(PrimcatError):
    code = "INVALID_IMAGE_REF"


class StoreCorruptError(PrimcatError):
    """A file in the document store failed to parse at startup."""

    code = "STORE_UNREADABLE"

    def __init__(self, path, detail: str = ""):
        self.path = str(path)
        super().__init__(detail or f"corrupt store file: {self.path}")


class PortInUseError(PrimcatError):
    code = "PORT_IN_USE"
