"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(ArithmeticError):
    """An iterative method hit its iteration or evaluation cap."""


class DivergenceError(ArithmeticError):
    """The requested integral or series does not converge."""


class SingularInformationError(ArithmeticError):
    """An information matrix or covariance sub-block cannot be inverted."""


class NegativeStatisticError(ArithmeticError):
    """A likelihood ratio came out negative beyond roundoff."""
