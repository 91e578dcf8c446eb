"""Shared exception types."""


class FFWeylError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FFWeylError, ValueError):
    """Mathematically invalid input (zero divisor, wrong field, bad syntax)."""


class PrecisionError(FFWeylError, ArithmeticError):
    """A truncated series does not carry enough digits to certify the result."""


class BudgetError(FFWeylError, RuntimeError):
    """An enumeration or search would exceed the configured budget."""


class HypothesisError(FFWeylError, ValueError):
    """The hypotheses of a lemma-style check are not met by the input.

    Raised so that a violated hypothesis is never confused with a failed
    conclusion; checks report the latter through their return value.
    """
