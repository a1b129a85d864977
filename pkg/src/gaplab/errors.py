"""Exception types shared across the library."""

from __future__ import annotations

__all__ = [
    "CapacityError",
    "ExprSyntaxError",
    "UnknownIdentifierError",
    "EvalError",
    "PositivityError",
]


class CapacityError(OverflowError):
    """A requested computation exceeds the supported integer width."""


class ExprSyntaxError(ValueError):
    """Malformed sequence expression.

    Carries the byte offset of the failure and the set of tokens that
    would have been accepted there.
    """

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        super().__init__(message)
        self.position = position
        self.expected = tuple(expected)


class UnknownIdentifierError(ExprSyntaxError):
    """An identifier other than ``n`` or ``ln`` appeared in an expression."""


class EvalError(ArithmeticError):
    """Expression evaluation failed at a specific index.

    Division by zero or ``ln`` of a nonpositive argument; the message
    names the offending subexpression and the index n.
    """

    def __init__(self, message: str, node: str | None = None, n: int | None = None):
        super().__init__(message)
        self.node = node
        self.n = n


class PositivityError(EvalError):
    """A sequence took a nonpositive value where positive terms are required."""
