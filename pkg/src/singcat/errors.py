"""Exception hierarchy; each class carries the CLI exit code it maps to."""

from __future__ import annotations

from typing import Optional


class SingcatError(Exception):
    """Base class for all engine errors."""

    exit_code = 1


class ParseError(SingcatError, ValueError):
    """Malformed polynomial text, JSON document or manifest."""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class PreconditionError(SingcatError, ValueError):
    """An operation was called outside its input language."""

    exit_code = 3


class RingMismatchError(PreconditionError):
    """Operands live in different polynomial rings."""


class VariableNameError(PreconditionError):
    """Invalid or colliding variable names."""


class NotIsolatedError(PreconditionError):
    """The germ has an infinite Milnor or Tyurina number."""

    def __init__(self, message: str, side: Optional[str] = None) -> None:
        self.side = side
        if side is not None:
            message = f"{side} germ: {message}"
        super().__init__(message)


class FactorizationError(PreconditionError):
    """A matrix pair does not satisfy AB = BA = f*I."""

    def __init__(self, message: str, product: Optional[str] = None, row: Optional[int] = None, column: Optional[int] = None) -> None:
        self.product = product
        self.row = row
        self.column = column
        super().__init__(message)


class BudgetExhaustedError(SingcatError):
    """A computation hit its configured degree or search budget."""

    exit_code = 4


class IncompleteBasisError(BudgetExhaustedError):
    """A standard basis could not be certified within the degree cap."""


class VerificationError(SingcatError):
    """A certificate did not replay."""

    exit_code = 5
