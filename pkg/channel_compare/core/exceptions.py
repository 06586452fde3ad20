"""Exception hierarchy for channel comparison."""

from typing import Optional


class ChannelCompareError(Exception):
    """Base class for all errors raised by channel_compare."""


class DimensionError(ChannelCompareError, ValueError):
    """Alphabets of two objects do not line up."""


class InvalidDistributionError(ChannelCompareError, ValueError):
    """A probability object violates nonnegativity or normalization."""


class UndefinedColumnError(ChannelCompareError, ValueError):
    """A conditional distribution was requested for a zero-probability symbol."""

    def __init__(self, symbol: str, message: Optional[str] = None):
        self.symbol = symbol
        super().__init__(message or f"conditioning symbol '{symbol}' has zero probability")


class IllConditionedError(ChannelCompareError, ArithmeticError):
    """The LP solver could not produce a self-verifying verdict."""


class IntegrityError(ChannelCompareError):
    """A certificate or witness failed re-verification."""


class PreconditionError(ChannelCompareError, ValueError):
    """An operation was called outside its documented domain."""


class ScenarioDomainError(ChannelCompareError, ValueError):
    """Scenario parameters produce an invalid distribution."""

    def __init__(self, message: str, mass: Optional[str] = None):
        self.mass = mass
        super().__init__(message)


class FormatError(ChannelCompareError, ValueError):
    """A text file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.line = line
        self.path = path
        location = ""
        if path:
            location += f"{path}:"
        if line is not None:
            location += f"{line}:"
        super().__init__(f"{location} {message}" if location else message)


class OracleDimensionError(ChannelCompareError, ValueError):
    """The brute-force oracle refuses problems above its dimension guard."""
