"""
Errors raised by the subject-language frontend and interpreter.
"""
from typing import Optional


class Position:
    """
    A line/column location inside a subject source file.
    """

    __slots__ = ("line", "column")

    def __init__(self, line: int, column: int):
        self.line = line
        self.column = column

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Position) and (self.line, self.column) == (other.line, other.column)

    def __hash__(self) -> int:
        return hash((self.line, self.column))

    def __repr__(self) -> str:
        return f"{self.line}:{self.column}"


class SubjectError(Exception):
    """
    Base class for diagnostics about a subject program.
    """

    def __init__(self, message: str, position: Optional[Position] = None):
        self.message = message
        self.position = position
        where = f" at {position}" if position else ""
        super().__init__(f"{message}{where}")


class SubjectSyntaxError(SubjectError):
    """Raised when the source does not follow the subject grammar."""


class DuplicateNameError(SubjectError):
    """Raised when two units, members or parameters share a name."""


class UnresolvedTypeError(SubjectError):
    """Raised when a referenced type is neither a unit, a builtin nor an exception."""


class SubjectTypeError(SubjectError):
    """Raised by the static checker on ill-typed code."""


class InterpreterFault(Exception):
    """
    An internal failure of the interpreter itself.

    Distinct from subject-level exceptions (which are ordinary outcomes):
    a fault means the test is discarded.
    """
