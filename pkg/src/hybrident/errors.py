"""Exception types shared across the package."""


class HybridentError(Exception):
    """Base class for all package errors."""


class DomainError(HybridentError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalError(HybridentError, ArithmeticError):
    """A numerical routine failed or produced an unusable result."""


class StabilityError(NumericalError):
    """The drift matrix has an eigenvalue with non-negative real part."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class ConvergenceError(NumericalError):
    """An iterative procedure did not settle within its budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
