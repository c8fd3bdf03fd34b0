"""Exception types raised by the numerical routines."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class QuadratureError(RuntimeError):
    """Adaptive integration did not reach the requested tolerance.

    The partial estimate and its error bound are kept so callers can decide
    whether the result is still usable.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DegenerateDistributionError(ArithmeticError):
    """Moments describe a point mass, so no Beta shape exists."""

    def __init__(self, message, mean):
        super().__init__(message)
        self.mean = mean


class SimulationError(RuntimeError):
    """The Monte Carlo sampler could not produce a valid realization."""
