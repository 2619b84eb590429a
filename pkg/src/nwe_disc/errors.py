"""Exception hierarchy shared by all modules."""


class DiscriminationError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(DiscriminationError, ValueError):
    """Input violates a precondition (shape, norm, Hermiticity, range)."""


class NumericError(DiscriminationError, ArithmeticError):
    """An iterative routine failed to converge within its budget."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DomainError(DiscriminationError, ValueError):
    """A matrix function was requested outside its domain."""


class SpanError(DiscriminationError, ValueError):
    """A vector or operator image does not lie in the span of a basis."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class AmbiguityError(DiscriminationError):
    """A measurement gives a conclusive outcome for the wrong state."""

    def __init__(self, i, j, value):
        super().__init__(
            f"element {i} responds to state {j} with probability {value:.3e}"
        )
        self.pair = (i, j)
        self.value = value


class InfeasibleError(DiscriminationError, ValueError):
    """Requested efficiency leaves the inconclusive element non-PSD."""

    def __init__(self, requested, max_feasible):
        super().__init__(
            f"efficiency {requested:.6g} exceeds the largest feasible value "
            f"{max_feasible:.12g}"
        )
        self.requested = requested
        self.max_feasible = max_feasible


class DegeneracyError(DiscriminationError, ArithmeticError):
    """A component needed as a divisor vanishes."""
