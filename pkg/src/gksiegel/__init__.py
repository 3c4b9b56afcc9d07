"""Exact local Siegel series, Gross-Keating invariants and lift coefficients."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, GKSiegelError, InvariantViolation, ValidationError
from .matrices import HalfIntegralMatrix, validate

__all__ = [
    "__version__",
    "BudgetExceeded",
    "GKSiegelError",
    "InvariantViolation",
    "ValidationError",
    "HalfIntegralMatrix",
    "validate",
]
