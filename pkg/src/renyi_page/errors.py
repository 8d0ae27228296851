"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """A quadrature or iterative routine failed its convergence check."""

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class NumericError(ArithmeticError):
    """Floating-point breakdown detected in a sampled quantity."""

    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed


class NotFoundError(LookupError):
    """A search over a finite candidate set found no qualifying element."""
