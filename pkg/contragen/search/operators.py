"""
Crossover and mutation over statement lists.
"""
import random
from typing import Dict, List, Optional, Set, Tuple

from ..lang import ast
from .factory import TestFactory
from .testcase import CALL, LITERAL, Arg, Statement, TestCase

MAX_INT_DELTA = 10


def _latest_compatible(statements: List[Statement], type_name: str) -> Optional[int]:
    for index in range(len(statements) - 1, -1, -1):
        stmt = statements[index]
        if stmt.produces_value and stmt.type_name == type_name:
            return index
    return None


def crossover(first: TestCase, second: TestCase, rng: random.Random, max_length: int) -> TestCase:
    """
    Single-point crossover: the head of `first` followed by the tail of
    `second`.

    References from the tail into the discarded head of `second` are
    repaired to the latest statement of the same type in the new head;
    statements that cannot be repaired are dropped along with their
    dependents.

    Args:
        first: Parent providing the head
        second: Parent providing the tail
        rng: Random source
        max_length: Hard cap on the child's length

    Returns:
        A new well-formed test
    """
    cut_first = rng.randint(0, len(first.statements))
    cut_second = rng.randint(0, len(second.statements))
    child = list(first.statements[:cut_first])
    mapping: Dict[int, Optional[int]] = {}
    for index in range(cut_second, len(second.statements)):
        stmt = second.statements[index]
        remap: Dict[int, int] = {}
        ok = True
        for ref in stmt.references():
            if ref >= cut_second:
                target = mapping.get(ref)
            else:
                target = _latest_compatible(child, second.statements[ref].type_name)
            if target is None:
                ok = False
                break
            remap[ref] = target
        if not ok or len(child) >= max_length:
            mapping[index] = None
            continue
        child.append(stmt.remap(remap))
        mapping[index] = len(child) - 1
    return TestCase(child)


def remove_with_dependents(test: TestCase, index: int) -> TestCase:
    """
    Remove a statement and every statement that transitively uses it.
    """
    removed: Set[int] = {index}
    for later in range(index + 1, len(test.statements)):
        if any(ref in removed for ref in test.statements[later].references()):
            removed.add(later)
    mapping: Dict[int, int] = {}
    kept: List[Statement] = []
    for position, stmt in enumerate(test.statements):
        if position in removed:
            continue
        mapping[position] = len(kept)
        kept.append(stmt)
    return TestCase([s.remap(mapping) for s in kept])


class Mutator:
    """
    Applies one or more random mutation operators to a test.
    """

    OPERATORS = ("literal", "argument", "insert", "delete", "duplicate", "method")

    def __init__(self, factory: TestFactory, rng: random.Random, max_length: int):
        self.factory = factory
        self.rng = rng
        self.max_length = max_length

    def mutate(self, test: TestCase) -> TestCase:
        result = self._apply(test)
        while self.rng.random() < 0.5:
            result = self._apply(result)
        return result

    def _apply(self, test: TestCase) -> TestCase:
        operator = self.rng.choice(self.OPERATORS)
        if not test.statements or (operator == "insert" and len(test.statements) < self.max_length):
            return self.factory.insert_call(test, self.rng.randint(0, len(test.statements)))
        mutated = getattr(self, f"_{operator}")(test)
        return mutated if mutated is not None else test

    # -- operators ---------------------------------------------------------

    def _literal_sites(self, test: TestCase) -> List[Tuple[int, int]]:
        sites = []
        for index, stmt in enumerate(test.statements):
            if stmt.kind == LITERAL:
                sites.append((index, -1))
                continue
            for position, arg in enumerate(stmt.args):
                if not arg.is_ref:
                    sites.append((index, position))
        return sites

    def _change_value(self, value, type_name: str):
        if isinstance(value, bool):
            return not value
        if isinstance(value, int):
            if self.rng.random() < 0.7:
                return value + self.rng.choice([-1, 1]) * self.rng.randint(1, MAX_INT_DELTA)
            return self.factory.random_int()
        return value

    def _literal(self, test: TestCase) -> Optional[TestCase]:
        sites = self._literal_sites(test)
        if not sites:
            return None
        index, position = self.rng.choice(sites)
        stmt = test.statements[index]
        if position < 0:
            changed = Statement.literal_of(stmt.type_name, self._change_value(stmt.value, stmt.type_name))
        else:
            args = list(stmt.args)
            param = self.factory.param_types(stmt)[position]
            if args[position].value is None:
                candidates = self.factory.existing(test, param, before=index)
                if not candidates:
                    return None
                args[position] = Arg.of_ref(self.rng.choice(candidates))
            else:
                args[position] = Arg.literal(self._change_value(args[position].value, param))
            changed = Statement(stmt.kind, stmt.type_name, stmt.unit, stmt.method, stmt.receiver, tuple(args), stmt.value)
        statements = list(test.statements)
        statements[index] = changed
        return TestCase(statements)

    def _argument(self, test: TestCase) -> Optional[TestCase]:
        sites = [
            (i, p)
            for i, s in enumerate(test.statements)
            if s.kind != LITERAL
            for p in range(len(s.args))
        ]
        if not sites:
            return None
        index, position = self.rng.choice(sites)
        stmt = test.statements[index]
        param = self.factory.param_types(stmt)[position]
        args = list(stmt.args)
        if param in ast.PRIMITIVE_TYPES:
            args[position] = Arg.literal(self.factory.random_literal(param))
        else:
            candidates = self.factory.existing(test, param, before=index)
            options = [Arg.of_ref(c) for c in candidates] + [Arg.literal(None)]
            if param == "any":
                options.append(Arg.literal(self.factory.random_int()))
            args[position] = self.rng.choice(options)
        statements = list(test.statements)
        statements[index] = Statement(
            stmt.kind, stmt.type_name, stmt.unit, stmt.method, stmt.receiver, tuple(args), stmt.value
        )
        return TestCase(statements)

    def _insert(self, test: TestCase) -> Optional[TestCase]:
        return None

    def _delete(self, test: TestCase) -> Optional[TestCase]:
        if len(test.statements) <= 1:
            return None
        return remove_with_dependents(test, self.rng.randrange(len(test.statements)))

    def _duplicate(self, test: TestCase) -> Optional[TestCase]:
        calls = [i for i, s in enumerate(test.statements) if s.kind == CALL]
        if not calls or len(test.statements) >= self.max_length * 2:
            return None
        stmt = test.statements[self.rng.choice(calls)]
        return TestCase(list(test.statements) + [stmt])

    def _method(self, test: TestCase) -> Optional[TestCase]:
        calls = [i for i, s in enumerate(test.statements) if s.kind == CALL]
        if not calls:
            return None
        index = self.rng.choice(calls)
        stmt = test.statements[index]
        used = any(index in s.references() for s in test.statements[index + 1:])
        params = self.factory.param_types(stmt)
        options = [
            m for m in self.factory.methods_of(stmt.unit)
            if m.name != stmt.method and m.param_types == params and (not used or m.return_type == stmt.type_name)
        ]
        if not options:
            return None
        choice = self.rng.choice(options)
        statements = list(test.statements)
        statements[index] = Statement.call(stmt.unit, choice.name, stmt.receiver, stmt.args, choice.return_type)
        return TestCase(statements)
