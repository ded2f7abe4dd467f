"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when an input lies outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """Raised when an adaptive numerical routine fails to reach its tolerance.

    Carries the best available estimate so callers can decide whether a
    degraded answer is still usable.
    """

    def __init__(self, message: str, estimate: float = float("nan"),
                 error_estimate: float = float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class SizeLimitError(ValueError):
    """Raised when an exact enumeration would exceed its hard size cap."""
