"""Exception types shared by the geometric and exact modules."""

from __future__ import annotations


class QuadricAxesError(ValueError):
    """Base error. ``step`` names the construction step that failed, if any."""

    def __init__(self, message: str, step: str | None = None):
        super().__init__(message)
        self.step = step

    def __str__(self) -> str:
        msg = super().__str__()
        return f"[{self.step}] {msg}" if self.step else msg


class DegenerateError(QuadricAxesError):
    """Geometric degeneracy: the construction has no unique answer for this input."""


class InputError(QuadricAxesError):
    """Malformed or out-of-contract input."""
