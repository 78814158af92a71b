"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` (e.g.
``"weight-sum-exceeded"``) next to the human message; the CLI prints the
code and maps the exception class to an exit status.
"""

from __future__ import annotations


class SNGError(Exception):
    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        return f"{self.code}: {self.args[0]}"


class NetworkError(SNGError):
    """A network violates one of its structural constraints."""


class UnknownNodeError(SNGError):
    code = "unknown-node"


class UnknownProductError(SNGError):
    code = "unknown-product"


class InvalidProfileError(SNGError):
    code = "invalid-profile"


class GraphClassError(SNGError):
    """An operation was called on a network outside its graph class."""


class PreconditionError(SNGError):
    pass


class GuardExceededError(SNGError):
    code = "guard-exceeded"

    def __init__(self, count: int, guard: int):
        super().__init__(f"{count} joint strategies exceed the guard of {guard}")
        self.count = count
        self.guard = guard


class FormatError(SNGError):
    """Syntax or semantic problem in a network/profile document."""

    def __init__(self, message: str, code: str = "syntax-error",
                 line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"line {line} column {column}: {message}"
        super().__init__(message, code)
        self.line = line
        self.column = column
