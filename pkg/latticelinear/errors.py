"""Exceptions raised by latticelinear."""

from __future__ import annotations

from typing import Optional


class InputError(ValueError):
    """An argument, state or file violates a documented precondition."""


class ParseError(InputError):
    """A text input (edge list, SMP instance, state literal) could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityError(ValueError):
    """A state space is larger than the configured exploration limit."""
