"""Exception types raised across the package."""


class TMethodError(Exception):
    """Base class for all package errors."""


class ParameterError(TMethodError, ValueError):
    """A distribution or model parameter lies outside its allowed domain."""


class DomainError(TMethodError, ValueError):
    """An argument lies outside the domain of the function being evaluated."""

    def __init__(self, message, value=None, index=None):
        super().__init__(message)
        self.value = value
        self.index = index


class InsufficientDataError(TMethodError, ValueError):
    pass


class ConvergenceError(TMethodError, RuntimeError):
    """No optimizer start converged. ``best`` holds the best-so-far result."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class IntegrationError(TMethodError, ArithmeticError):
    pass


class NotApplicableError(TMethodError, ValueError):
    pass


class UnderflowError(TMethodError, ArithmeticError):
    pass


class ExperimentError(TMethodError, RuntimeError):
    pass


class DataFileError(TMethodError, ValueError):
    """Malformed input file. ``rows`` lists (row_number, reason) pairs."""

    def __init__(self, message, rows=()):
        super().__init__(message)
        self.rows = list(rows)
