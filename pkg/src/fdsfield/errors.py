"""Exception types shared across the package."""


class FDSError(Exception):
    """Base class for all package errors."""


class ValidationError(FDSError, ValueError):
    """Input is well-formed but violates a mathematical precondition."""


class LocalityError(ValidationError):
    """A local update reads or writes outside its vertex neighbourhood."""


class BudgetExceeded(FDSError, RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""
