"""Exception hierarchy shared by the services, the CLI and the HTTP layer."""

from typing import Optional


class SkeinError(Exception):
    """Base class for every error raised by the skein services."""


class NonDivisibleError(SkeinError, ArithmeticError):
    """The divisor does not divide the dividend in the Laurent ring."""


class SkeinZeroDivisionError(SkeinError, ZeroDivisionError):
    """Division by the zero scalar."""


class ParseError(SkeinError, ValueError):
    def __init__(self, message: str, position: int = 0, text: Optional[str] = None):
        self.position = position
        self.text = text
        super().__init__(f"{message} (at position {position})")


class ScopeLimitError(SkeinError):
    """A request falls outside the documented scope of the engine."""


class ReductionLimitError(ScopeLimitError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"Skein reduction exceeded the limit of {limit} resolution states")


class LabelingError(SkeinError):
    """Idempotent eigenvalues do not match exactly one partition."""


class InconsistentClosureError(SkeinError):
    """The closure constraints of the unknot normalization admit no common solution."""
