"""Exception types shared across the package.

The CLI maps these onto process exit codes: parameter errors exit 1,
promise violations exit 2, resource-cap errors exit 3.
"""


class GspError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(GspError, ValueError):
    """Invalid problem parameters (non-prime p, k out of range, ...)."""


class DimensionMismatchError(GspError, ValueError):
    """Operands live over different (p, n) and cannot be combined."""


class PromiseViolationError(GspError):
    """The oracle answered in a way no hidden subgroup can explain."""


class ResourceCapError(GspError):
    """An enumeration or simulation exceeded its configured budget."""
