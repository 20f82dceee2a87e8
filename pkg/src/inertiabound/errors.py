"""Exceptions shared across the package."""


class BudgetExceeded(RuntimeError):
    """Raised when an exact search would exceed its enumeration budget.

    Callers never receive a partial or guessed answer in its place.
    """
