"""Exception types raised across the package."""


class EmgrError(Exception):
    """Base class for all package errors."""


class DomainError(EmgrError, ValueError):
    """Argument outside the region where an operation is defined."""


class SingularMetric(EmgrError, ArithmeticError):
    """Metric determinant vanishes (or underflows) at the evaluation point."""


class NoConvergence(EmgrError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance.

    ``result`` holds the best partial estimate; ``reason`` is ``"budget"``
    when the evaluation budget ran out and ``"roundoff"`` when the
    tolerance lies below the attainable floating-point floor.
    """

    def __init__(self, message, result=None, reason="budget"):
        super().__init__(message)
        self.result = result
        self.reason = reason


class DivergencePath(EmgrError, ValueError):
    """Self-energy requested for a profile whose integral diverges."""
