"""Exception hierarchy shared by every module."""


class BetaKwError(Exception):
    """Base class for all package errors."""


class DomainError(BetaKwError, ValueError):
    """An argument lies outside the domain of a function."""


class InputError(BetaKwError, ValueError):
    """User data cannot be used (empty, degenerate, out of range)."""


class ConvergenceError(BetaKwError, RuntimeError):
    """An iterative solver failed to converge.

    ``best`` carries the last iterate so callers can inspect it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class AccuracyError(BetaKwError, RuntimeError):
    """A numerical routine could not reach the requested accuracy."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class EvaluationError(BetaKwError, ArithmeticError):
    """A series produced non-finite or cancellation-dominated terms."""


class InfeasibleError(BetaKwError, ValueError):
    """The request has no solution (e.g. indistinguishable families)."""
