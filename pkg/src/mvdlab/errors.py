"""Exception hierarchy shared by every mvdlab module."""

from __future__ import annotations


class MvdLabError(Exception):
    """Base class for all library errors."""


class SchemaError(MvdLabError, ValueError):
    """An attribute set is not contained in (or does not match) a relation schema."""


class DomainError(MvdLabError, ValueError):
    """A weight violates the positivity required by a checker."""


class ValidationError(MvdLabError, ValueError):
    """A statement, query or axiom parameter is malformed."""


class InputError(ValidationError):
    """Malformed input text, located by source, line and offending token."""

    def __init__(self, message: str, source: str = "<input>", line: int | None = None,
                 token: str | None = None):
        self.source = source
        self.line = line
        self.token = token
        where = source if line is None else f"{source}:{line}"
        detail = f" (token {token!r})" if token is not None else ""
        super().__init__(f"{where}: {message}{detail}")


class ResourceError(MvdLabError):
    """A configured search or enumeration bound was exceeded."""
