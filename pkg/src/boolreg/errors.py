"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """A numeric precondition on an operation's input was violated."""


class BudgetExceededError(RuntimeError):
    """An enumeration or decomposition exceeded its configured budget."""
