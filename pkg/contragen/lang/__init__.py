"""
Subject language: parser, static checker and instrumented interpreter.
"""
from .ast import SubjectProgram
from .errors import (
    DuplicateNameError,
    InterpreterFault,
    Position,
    SubjectError,
    SubjectSyntaxError,
    SubjectTypeError,
    UnresolvedTypeError,
)
from .interpreter import execute_test
from .parser import parse_file, parse_program
from .snapshot import Snapshot, snapshot_state
from .trace import BranchRecord, CallRecord, ExecutionTrace

__all__ = [
    "SubjectProgram",
    "DuplicateNameError",
    "InterpreterFault",
    "Position",
    "SubjectError",
    "SubjectSyntaxError",
    "SubjectTypeError",
    "UnresolvedTypeError",
    "execute_test",
    "parse_file",
    "parse_program",
    "Snapshot",
    "snapshot_state",
    "BranchRecord",
    "CallRecord",
    "ExecutionTrace",
]
