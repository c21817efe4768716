"""Exception hierarchy for Induced Forest Bounds."""

from __future__ import annotations


class InducedForestError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(InducedForestError, ValueError):
    """A parameter is outside the range an operation accepts."""


class GenerationError(InducedForestError):
    """A random graph could not be generated within the retry budget."""


class DegenerateStateError(InducedForestError, ArithmeticError):
    """A kinetic state has a zero denominator (w or b)."""


class IntegrationError(InducedForestError):
    """The ODE integration failed or lost positivity."""

    def __init__(self, message: str, x: float | None = None) -> None:
        super().__init__(message)
        self.x = x


class HorizonExceededError(IntegrationError):
    """The stopping certificate was not reached before the hard x ceiling."""


class BudgetExceededError(InducedForestError):
    """An exact enumeration would exceed the configured assignment budget."""

    def __init__(self, message: str, size: int, budget: int) -> None:
        super().__init__(message)
        self.size = size
        self.budget = budget


class OptimizationError(InducedForestError):
    """No grid point of the p0 search could be evaluated."""
