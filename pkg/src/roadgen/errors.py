"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A value violates one of its structural invariants.

    ``invariant`` is a short stable name ("no-overlap", "winding", ...)
    that callers and tests can match on.
    """

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


class ParseError(ValueError):
    """Input text could not be parsed into a document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class InstantiationError(RuntimeError):
    """A component could not be built from the given parameters."""
