class DiskFrontsError(Exception):
    """Base class for errors raised by disk_fronts."""


class QuadratureError(DiskFrontsError, ArithmeticError):
    """Adaptive quadrature stopped before reaching its tolerance.

    ``value`` holds the partial result and ``error`` the achieved error estimate.
    """

    def __init__(self, message, value=float("nan"), error=float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error


class BreakpointError(DiskFrontsError, ValueError):
    """The front map is not differentiable at the requested launch angle."""


class DegenerateCriticalPointError(DiskFrontsError, ValueError):
    """A critical point of a phase function has (numerically) vanishing curvature."""


class DegenerateSeriesError(DiskFrontsError, ValueError):
    """The quantity is undefined for this series; use a boundedness test instead."""


class InsufficientDataError(DiskFrontsError, ValueError):
    """Not enough samples or span to estimate the requested quantity."""
