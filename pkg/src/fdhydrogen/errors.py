"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation (n < 1, delta <= 0, z = 0, ...)."""


class FieldMismatchError(ValueError):
    """Arithmetic between quadratic numbers living in different fields Q(sqrt(D))."""


class ConvergenceError(RuntimeError):
    """An iterative method stopped without meeting its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConditioningError(ValueError):
    """Request would exceed the numerically safe range of a construction."""
