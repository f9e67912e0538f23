"""Exception types raised across the package."""


class SusyLabError(Exception):
    """Base class for all package errors."""


class DomainError(SusyLabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateCouplingError(DomainError):
    """s = 0 (g = 1): the partner construction degenerates."""


class SingularProfileError(SusyLabError, ArithmeticError):
    """The even solution y vanishes on the grid, so u = y'/y blows up."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class ConvergenceError(SusyLabError, ArithmeticError):
    pass


class UsageError(SusyLabError, ValueError):
    """Inconsistent or missing inputs (empty sample sets, grid mismatches, ...)."""
