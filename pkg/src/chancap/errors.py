"""Exception types shared across the package.

Every error raised on bad input derives from ChancapError and from ValueError,
so callers can catch either the package hierarchy or the builtin they expect.
"""

from __future__ import annotations

__all__ = [
    "ChancapError",
    "InvalidDistribution",
    "DimensionMismatch",
    "AbsoluteContinuityViolation",
    "NonInteriorInput",
    "NegativeEntry",
    "RowNotStochastic",
    "ParameterOutOfRange",
    "TooManyInputs",
    "ParseError",
    "DroppedOutputColumnWarning",
]


class ChancapError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDistribution(ChancapError, ValueError):
    """Weights cannot be interpreted as a probability distribution."""


class DimensionMismatch(ChancapError, ValueError):
    """Two objects that must share an alphabet have different sizes."""


class AbsoluteContinuityViolation(ChancapError, ValueError):
    """A divergence D(p || q) is infinite because q lacks mass where p has it."""


class NonInteriorInput(ChancapError, ValueError):
    """An operation that requires strictly positive weights got a boundary point."""


class NegativeEntry(ChancapError, ValueError):
    """A channel matrix contains a negative probability."""


class RowNotStochastic(ChancapError, ValueError):
    """A channel row does not sum to one within tolerance."""

    def __init__(self, row: int, deviation: float):
        self.row = row
        self.deviation = deviation
        super().__init__(
            f"row {row} is not a probability vector (sum deviates from 1 by {deviation:.3e})"
        )


class ParameterOutOfRange(ChancapError, ValueError):
    """A numeric parameter lies outside its documented domain."""


class TooManyInputs(ChancapError, ValueError):
    """Exhaustive search was asked for on an alphabet too large to enumerate."""


class ParseError(ChancapError, ValueError):
    """A channel file could not be parsed in the requested format."""


class DroppedOutputColumnWarning(UserWarning):
    """An all-zero output column was removed during channel construction."""
