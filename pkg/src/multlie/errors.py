"""Exception hierarchy shared across the package."""


class MultLieError(Exception):
    """Base class for every error raised by multlie."""


class StructuralError(MultLieError):
    """A table is malformed (wrong shape, entry out of range)."""


class PreconditionError(MultLieError):
    """An operation was called on input violating its precondition."""


class ResourceLimitError(MultLieError):
    """A configured size or coset budget was exceeded."""


class InternalConsistencyError(MultLieError):
    """A computed object failed a check that must hold on valid input."""


class ParseError(MultLieError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
