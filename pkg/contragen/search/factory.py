"""
Random construction of test cases against a subject program.
"""
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ..lang import ast
from .config import SearchConfig
from .testcase import CALL, CONSTRUCT, LITERAL, Arg, Statement, TestCase

MAX_DEPENDENCY_DEPTH = 3
SMALL_INTS = (-1, 0, 1)


@dataclass(frozen=True)
class CallTarget:
    """A method or constructor the factory may call."""

    unit: str
    name: str
    param_types: Tuple[str, ...]
    return_type: str
    is_constructor: bool

    @property
    def method_id(self) -> str:
        return f"{self.unit}.{self.name}"


def _collect_int_constants(program: ast.SubjectProgram) -> List[int]:
    constants = set()

    def visit(node):
        if isinstance(node, ast.IntLit):
            constants.update({node.value, node.value - 1, node.value + 1})
            return
        for value in getattr(node, "__dict__", {}).values():
            if isinstance(value, (ast.Expr, ast.Stmt)):
                visit(value)
            elif isinstance(value, tuple):
                for item in value:
                    if isinstance(item, (ast.Expr, ast.Stmt)):
                        visit(item)

    for method in program.all_methods():
        visit(method.body)
    return sorted(constants)


class TestFactory:
    """
    Builds random statements and tests.

    Every random choice goes through the injected `random.Random`, so a fixed
    seed reproduces the same tests.
    """

    __test__ = False

    def __init__(
        self,
        program: ast.SubjectProgram,
        config: SearchConfig,
        rng: random.Random,
        target_methods: Sequence[str] = (),
    ):
        self.program = program
        self.config = config
        self.rng = rng
        self.callables = self._collect_callables()
        self.targets = [c for c in self.callables if c.method_id in set(target_methods)]
        self.constants = _collect_int_constants(program)

    def _collect_callables(self) -> List[CallTarget]:
        callables = []
        for unit in self.program.units:
            ctor = unit.constructor()
            params = ctor.param_types if ctor else ()
            callables.append(CallTarget(unit.name, unit.name, params, unit.name, True))
            for method in unit.methods:
                callables.append(CallTarget(unit.name, method.name, method.param_types, method.return_type, False))
        return callables

    def param_types(self, stmt: Statement) -> Tuple[str, ...]:
        if stmt.unit == ast.LIST:
            return () if stmt.kind == CONSTRUCT else ast.LIST_METHODS[stmt.method][0]
        method = self.program.method(stmt.method_id)
        return method.param_types if method else ()

    def methods_of(self, unit_name: str) -> List[CallTarget]:
        if unit_name == ast.LIST:
            return [
                CallTarget(ast.LIST, name, sig[0], sig[1], False) for name, sig in sorted(ast.LIST_METHODS.items())
            ]
        return [c for c in self.callables if c.unit == unit_name and not c.is_constructor]

    # -- literals ----------------------------------------------------------

    def random_int(self) -> int:
        roll = self.rng.random()
        if roll < 0.3:
            return self.rng.choice(SMALL_INTS)
        if roll < 0.5 and self.constants:
            return self.rng.choice(self.constants)
        return self.rng.randint(-self.config.int_range, self.config.int_range)

    def random_literal(self, type_name: str):
        if type_name == ast.INT:
            return self.random_int()
        if type_name == ast.BOOL:
            return self.rng.random() < 0.5
        return None

    # -- construction ------------------------------------------------------

    def existing(self, test: TestCase, type_name: str, before: Optional[int] = None) -> List[int]:
        limit = len(test.statements) if before is None else before
        result = []
        for index in range(limit):
            stmt = test.statements[index]
            if not stmt.produces_value or stmt.kind == LITERAL:
                continue
            if type_name == "any" or stmt.type_name == type_name:
                result.append(index)
        return result

    def obtain(self, test: TestCase, type_name: str, depth: int = 0, allow_null: bool = True) -> Arg:
        """
        Produce an argument of the given type, appending any statements it
        needs to `test`.
        """
        if type_name in ast.PRIMITIVE_TYPES:
            return Arg.literal(self.random_literal(type_name))
        if type_name == "any":
            candidates = self.existing(test, "any")
            if candidates and self.rng.random() < 0.7:
                return Arg.of_ref(self.rng.choice(candidates))
            return Arg.literal(self.random_int())
        if allow_null and self.rng.random() < self.config.null_probability:
            return Arg.literal(None)
        candidates = self.existing(test, type_name)
        if candidates and self.rng.random() < 0.5:
            return Arg.of_ref(self.rng.choice(candidates))
        if depth >= MAX_DEPENDENCY_DEPTH:
            if candidates:
                return Arg.of_ref(candidates[-1])
            return Arg.literal(None)
        index = self.append_construct(test, type_name, depth + 1)
        return Arg.literal(None) if index is None else Arg.of_ref(index)

    def append_construct(self, test: TestCase, type_name: str, depth: int = 0) -> Optional[int]:
        if type_name == ast.LIST:
            test.statements.append(Statement.construct(ast.LIST, ()))
            return len(test.statements) - 1
        unit = self.program.unit(type_name)
        if unit is None:
            return None
        ctor = unit.constructor()
        params = ctor.param_types if ctor else ()
        args = tuple(self.obtain(test, p, depth) for p in params)
        test.statements.append(Statement.construct(unit.name, args))
        return len(test.statements) - 1

    def receiver_for(self, test: TestCase, unit_name: str, depth: int = 0) -> Optional[int]:
        candidates = self.existing(test, unit_name)
        if candidates and self.rng.random() < 0.8:
            return self.rng.choice(candidates)
        return self.append_construct(test, unit_name, depth)

    def append_call(self, test: TestCase, target: CallTarget) -> Optional[int]:
        """
        Append a call (with its dependencies) to the end of `test`.

        Returns:
            Index of the new statement, or None if it could not be built
        """
        if target.is_constructor:
            return self.append_construct(test, target.unit)
        receiver = self.receiver_for(test, target.unit)
        if receiver is None:
            return None
        args = tuple(self.obtain(test, p) for p in target.param_types)
        test.statements.append(
            Statement.call(target.unit, target.name, receiver, args, target.return_type)
        )
        return len(test.statements) - 1

    def pick_callable(self) -> CallTarget:
        if self.targets and self.rng.random() < self.config.target_bias:
            return self.rng.choice(self.targets)
        return self.rng.choice(self.callables)

    def random_test(self) -> TestCase:
        """
        A fresh random test of length drawn uniformly from [1, max_test_length].
        """
        length = self.rng.randint(1, self.config.max_test_length)
        test = TestCase()
        attempts = 0
        while len(test.statements) < length and attempts < length * 4:
            attempts += 1
            self.append_call(test, self.pick_callable())
        return test

    def insert_call(self, test: TestCase, position: int) -> TestCase:
        """
        Insert a random call (plus dependencies) at `position`.
        """
        position = max(0, min(position, len(test.statements)))
        prefix = TestCase(list(test.statements[:position]))
        self.append_call(prefix, self.pick_callable())
        shift = len(prefix.statements) - position
        mapping = {i: (i if i < position else i + shift) for i in range(len(test.statements))}
        suffix = [s.remap(mapping) for s in test.statements[position:]]
        return TestCase(prefix.statements + suffix)


def is_well_formed(test: TestCase, program: ast.SubjectProgram) -> bool:
    """
    Check references and arities of a test against a program.
    """
    for index, stmt in enumerate(test.statements):
        for ref in stmt.references():
            if ref >= index or not test.statements[ref].produces_value:
                return False
        if stmt.kind == CALL:
            if stmt.receiver is None or test.statements[stmt.receiver].type_name != stmt.unit:
                return False
        if stmt.kind in (CALL, CONSTRUCT) and stmt.unit != ast.LIST:
            method = program.method(stmt.method_id)
            expected = method.param_types if method else ()
            if method is None and (stmt.kind == CALL or program.unit(stmt.unit) is None):
                return False
            if len(expected) != len(stmt.args):
                return False
            for arg, type_name in zip(stmt.args, expected):
                if arg.is_ref and not ast.assignable(test.statements[arg.ref].type_name, type_name):
                    return False
    return True
