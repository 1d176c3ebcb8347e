"""Exception types raised across the package."""


class NimScoreError(Exception):
    """Base class for all package errors."""


class InvalidInputError(NimScoreError, ValueError):
    """Malformed position, rational, or argument."""


class IllegalMoveError(NimScoreError, ValueError):
    pass


class PayoffFormatError(NimScoreError, ValueError):
    """A serialized payoff function failed to parse or validate."""


class ParityMismatchError(NimScoreError, ValueError):
    pass


class ResourceLimitError(NimScoreError):
    """The solver exceeded its configured position ceiling."""


class OracleBoundError(NimScoreError, ValueError):
    pass


class CacheFormatError(NimScoreError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InternalError(NimScoreError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""
