"""
Evaluation of contract expressions against a recorded call.

The same binding rules serve the fitness functions, the baseline's
post-hoc oracles and the replay of emitted tests.
"""
from typing import Any, Dict, Optional

from ..lang import ast
from ..lang.interpreter import GuardUnevaluable, invoke_isolated
from ..lang.trace import CallRecord
from ..lang.values import values_equal
from .model import (
    EXCEPTION_TYPE,
    INSTANCEOF,
    CallPred,
    CExpr,
    CLiteral,
    ExceptionName,
    FieldRef,
    Negation,
    ParamRef,
    RetVal,
    Term,
)

DEFAULT_GUARD_STEP_BUDGET = 1000


class Unevaluable(Exception):
    """An expression has no value for this call (null receiver, guard threw, ...)."""


class CallBinding:
    """
    Values of contract expressions for one call.

    Inputs come from the call's pre-call snapshot; `retVal` comes from the
    recorded outcome, translated into snapshot identity.
    """

    def __init__(
        self,
        program: ast.SubjectProgram,
        record: CallRecord,
        guard_step_budget: int = DEFAULT_GUARD_STEP_BUDGET,
    ):
        self.program = program
        self.record = record
        self.guard_step_budget = guard_step_budget
        if record.snapshot is None:
            raise ValueError(f"Call {record.method_id} at statement {record.statement_index} has no snapshot")
        self.snapshot = record.snapshot

    def value(self, expr: CExpr) -> Any:
        """
        Evaluate an expression.

        Raises:
            Unevaluable: When the expression cannot be given a value
        """
        if isinstance(expr, CLiteral):
            return expr.value
        if isinstance(expr, ParamRef):
            return self.snapshot.args[expr.index]
        if isinstance(expr, FieldRef):
            if self.snapshot.receiver_is_null:
                raise Unevaluable("null receiver")
            return self.snapshot.field(expr.name)
        if isinstance(expr, CallPred):
            key = ("call", expr, self.guard_step_budget)
            cache = self.record.cache
            if key not in cache:
                try:
                    cache[key] = self._invoke(expr)
                except Unevaluable as exc:
                    cache[key] = exc
            result = cache[key]
            if isinstance(result, Unevaluable):
                raise Unevaluable(str(result))
            return result
        if isinstance(expr, RetVal):
            if self.record.threw:
                raise Unevaluable(f"call threw {self.record.thrown}")
            return self.snapshot.translate(self.record.returned)
        if isinstance(expr, ExceptionName):
            return expr.name
        if isinstance(expr, Negation):
            return not all(self.holds(t) for t in expr.terms)
        raise Unevaluable(f"unsupported expression {expr!r}")

    def _invoke(self, expr: CallPred) -> Any:
        target = self.value(expr.receiver)
        args = [self.value(a) for a in expr.args]
        if target is None:
            raise Unevaluable(f"null receiver for {expr.method}")
        try:
            return invoke_isolated(
                self.program, self.snapshot, target, expr.method, args, self.guard_step_budget
            )
        except GuardUnevaluable as exc:
            raise Unevaluable(str(exc)) from exc

    def holds(self, term: Term) -> bool:
        """
        Decide whether a term holds for this call.

        Raises:
            Unevaluable: When an operand has no value
        """
        if term.kind == EXCEPTION_TYPE:
            thrown = self.record.threw and self.value(term.rhs) in self.record.thrown_lineage
            return thrown if term.op == INSTANCEOF else not thrown
        left = self.value(term.lhs)
        right = self.value(term.rhs)
        return compare(term.op, left, right)


def compare(op: str, left: Any, right: Any) -> bool:
    if op == "=":
        return values_equal(left, right)
    if op == "!=":
        return not values_equal(left, right)
    if left is None or right is None:
        raise Unevaluable("ordering comparison with null")
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    if op == ">=":
        return left >= right
    raise Unevaluable(f"unknown operator {op}")


def term_holds(binding: CallBinding, term: Term) -> Optional[bool]:
    """
    Three-valued term check.

    Returns:
        True or False, or None when the term is unevaluable for the call
    """
    cache: Dict[Any, Any] = binding.record.cache
    key = ("holds", term)
    if key not in cache:
        try:
            cache[key] = binding.holds(term)
        except Unevaluable:
            cache[key] = None
    return cache[key]
