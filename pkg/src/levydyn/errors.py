class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class UnsupportedRegimeError(DomainError):
    """Parameter regime excluded by construction rather than by numerics."""


class GridWarning(UserWarning):
    """Grid too coarse or box too small for the requested accuracy."""
