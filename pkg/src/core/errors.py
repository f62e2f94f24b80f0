"""
Exception hierarchy
"""

from __future__ import annotations


class DripError(Exception):
    """Base class for every error raised by the toolkit"""


class InvalidInputError(DripError, ValueError):
    """Input violates a documented precondition"""


class OutOfDomainError(InvalidInputError):
    """Value lies outside the domain where a closed form is defined"""


class BudgetExceededError(DripError):
    """Exact computation refused because it exceeds a configured budget"""

    def __init__(self, message: str, required: int, budget: int) -> None:
        super().__init__(message)
        self.required = required
        self.budget = budget


class IndeterminateError(DripError):
    """A lower-bound certificate cannot confirm the theorem hypothesis"""


class DegenerateFrameError(DripError):
    """Random frame construction kept drawing rank-deficient matrices"""
