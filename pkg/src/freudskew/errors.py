"""Exception types shared across the package."""
from .numerics import NonConvergence


class CrossCheckFailure(ArithmeticError):
    """Two independent routes to the same quantity disagree."""

    def __init__(self, message, *candidates):
        super().__init__(message)
        self.candidates = candidates


class SingularPivot(ArithmeticError):
    pass


class PrecisionExhausted(ArithmeticError):
    """A computation cancelled away more than half of the working digits."""


class PositivityLoss(ArithmeticError):
    """Forward iteration produced a non-positive recurrence coefficient.

    ``index`` is the first offending index; ``partial`` holds the sequence
    computed up to that point.
    """

    def __init__(self, index, partial=()):
        super().__init__(f"beta_{index} is not positive")
        self.index = index
        self.partial = list(partial)


class DivisionByNearZero(ArithmeticError):
    def __init__(self, index):
        super().__init__(f"near-zero divisor while advancing xi at l={index}")
        self.index = index


class ZeroDenominator(ArithmeticError):
    def __init__(self, depth):
        super().__init__(f"vanishing continued-fraction denominator at depth {depth}")
        self.depth = depth


class ParityViolation(ValueError):
    pass


__all__ = [
    "NonConvergence", "CrossCheckFailure", "SingularPivot", "PrecisionExhausted",
    "PositivityLoss", "DivisionByNearZero", "ZeroDenominator", "ParityViolation",
]
