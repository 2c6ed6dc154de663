"""Exception types shared across the package."""


class FibSpecError(Exception):
    """Base class for all package errors."""


class DomainError(FibSpecError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class NonConvergence(FibSpecError, ArithmeticError):
    """An iterative solver failed to reach its tolerance within the iteration cap."""


class TruncationError(FibSpecError):
    """A finite section would give an inexact result for the requested input."""


class NotAnEigenvalue(FibSpecError, ValueError):
    pass


class SingularResolvent(FibSpecError, ArithmeticError):
    """lambda is (numerically) a root of the characteristic polynomial."""


class OutsideResolventSet(FibSpecError, ValueError):
    """|lambda| <= 1: the closed-form inverse does not exist there."""


class NoInteriorMinimum(FibSpecError):
    """The speed objective is lower at the edge of its domain than at the bracketed minimum."""

    def __init__(self, message, edge_values=None):
        super().__init__(message)
        self.edge_values = edge_values or {}


class BoundaryWarning(UserWarning):
    """A value sits within tolerance of the unit circle or of lambda = 1."""
