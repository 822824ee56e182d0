"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class UndefinedMomentError(DomainError):
    """A requested moment does not exist for the given parameter values."""


class NumericError(RuntimeError):
    """An iterative numeric routine failed to converge.

    Carries the last iterate so callers can inspect how far the routine got.
    """

    def __init__(self, message: str, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
