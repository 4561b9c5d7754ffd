"""Exception types shared across the package.

The CLI maps these onto exit codes: usage errors exit 2, resource-limit
errors exit 3, and numerical-consistency failures exit 4.
"""


class UsageError(ValueError):
    """A caller violated a documented precondition or passed bad input."""


class ResourceLimitError(RuntimeError):
    """An enumeration or computation exceeded its configured work limit."""


class NumericalConsistencyError(ArithmeticError):
    """A floating-point result violated a mathematical guarantee."""
