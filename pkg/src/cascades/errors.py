"""Exception types shared across the package."""

from __future__ import annotations


class PreconditionError(ValueError):
    """An operation was called with inputs that violate its contract."""


class ParseError(ValueError):
    """Polynomial text could not be parsed.

    ``position`` is the 1-based character offset of the offending input.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"parse error at position {position}: {message}")
        self.position = position


class DerivativeVanishedError(ArithmeticError):
    """Newton iteration hit a point where the derivative is zero and no
    safeguard bracket was available."""
