"""Exception types shared across the package."""


class GhwlabError(Exception):
    """Base class for all package errors."""


class ParameterError(GhwlabError, ValueError):
    """Invalid construction parameters (non-prime characteristic, bad
    divisibility, out-of-range values, malformed inputs)."""


class ContextMismatchError(GhwlabError, ValueError):
    """Operands belong to different field contexts."""


class BudgetExceededError(GhwlabError, RuntimeError):
    """An exhaustive enumeration would exceed the configured budget.

    Carries the required budget so callers can print an actionable message.
    """

    def __init__(self, message, required):
        super().__init__(message)
        self.required = required


class FormulaUnavailableError(GhwlabError, ValueError):
    """The closed-form hierarchy does not apply to these parameters."""
