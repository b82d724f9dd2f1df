"""Exception types shared across the package."""


class StableGapError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(StableGapError, ValueError):
    """Invalid user input: malformed domain, out-of-range parameter, bad grid."""


class UnsupportedConfigurationError(StableGapError, ValueError):
    """A domain/exponent combination the solver deliberately does not handle."""


class NumericalBudgetError(StableGapError, RuntimeError):
    """A requested accuracy or truncation budget cannot be met."""


class EstimationError(StableGapError, RuntimeError):
    """A statistical estimate could not be formed (no stable window, too few survivors)."""
