"""Exception types shared across the package."""


class CobexError(Exception):
    """Base class for all library errors."""


class InvalidParameter(CobexError, ValueError):
    pass


class UnsupportedOperation(CobexError):
    pass


class WouldBreakClosure(CobexError):
    """Raised when a deletion would leave cells whose faces are missing."""


class NotACycle(CobexError, ValueError):
    pass


class UndefinedValue(CobexError, ValueError):
    pass


class BudgetExceeded(CobexError):
    """A computation would exceed the configured memory/time budget.

    ``q`` is the quotient dimension that triggered the refusal, when known.
    """

    def __init__(self, message: str, q: int | None = None):
        super().__init__(message)
        self.q = q


class NumericFailure(CobexError):
    pass
