"""Exception hierarchy for stickelgraph."""


class StickelgraphError(ValueError):
    """Base class for invalid input to stickelgraph operations."""


class DigraphFormatError(StickelgraphError):
    """Raised when a digraph description cannot be parsed.

    The message carries the position of the offending entry, for example
    ``edges[3].to``.
    """

    def __init__(self, message: str, position: str = ""):
        self.position = position
        super().__init__(f"{position}: {message}" if position else message)


class PreconditionError(StickelgraphError):
    """Raised when the input violates an operation's precondition."""


class ConfigurationError(StickelgraphError):
    """Raised for invalid settings or environment overrides."""


class PrimeCapError(PreconditionError):
    """Raised when a prime exceeds the configured cap."""


class PrecisionCapError(ArithmeticError):
    """Raised when an l-adic valuation cannot be resolved below the precision cap."""


class IntegralityError(ArithmeticError):
    """Raised when a quantity that must be a rational integer is not one."""


class ConsistencyError(ArithmeticError):
    """Raised when two independent computations of the same quantity disagree."""
