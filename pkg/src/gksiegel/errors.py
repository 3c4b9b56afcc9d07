"""Exception hierarchy shared by every module; the CLI maps each to an exit code."""


class GKSiegelError(Exception):
    """Base class for library errors."""


class ValidationError(GKSiegelError, ValueError):
    """Malformed input (exit code 1)."""


class BudgetExceeded(GKSiegelError):
    """An enumeration would exceed the configured visit budget (exit code 2)."""


class InvariantViolation(GKSiegelError, AssertionError):
    """A mathematical invariant failed at runtime (exit code 3)."""
