"""Exception types shared across the oracles."""


class OracleError(Exception):
    """Base class for every error raised by this package."""


class GraphParseError(OracleError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)
        self.line = line


class CapacityError(OracleError, ValueError):
    """A failure set exceeded the capacity the oracle was built for."""


class CapExceeded(OracleError, RuntimeError):
    """Refusal: an exhaustive routine was asked to run beyond its size cap."""


class RetryableError(OracleError, ArithmeticError):
    """A randomized structure hit a bad random choice; rebuild with a new seed."""


class NotACoverError(OracleError, ValueError):
    pass
