"""Exception types shared across the package."""


class FrobcalcError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInput(FrobcalcError, ValueError):
    """Input data violates a structural precondition (shape, field mix, schema)."""


class RoleViolation(FrobcalcError, ValueError):
    """A linear map does not satisfy the laws its declared role requires."""


class BudgetExceeded(FrobcalcError, RuntimeError):
    """A bar-complex assembly would exceed the configured size budget."""


class InternalInconsistency(FrobcalcError, RuntimeError):
    """Two independent computation routes disagreed; indicates a bug, not bad input."""
