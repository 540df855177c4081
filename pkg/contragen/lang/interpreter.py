"""
Instrumented tree-walking interpreter for subject programs.
"""
from typing import TYPE_CHECKING, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from . import ast
from .errors import InterpreterFault
from .snapshot import Snapshot, maybe_snapshot
from .trace import HALT_FAULT, HALT_STEP_BUDGET, BranchRecord, CallRecord, ExecutionTrace
from .values import ListRef, ObjectRef, Value, default_value, render_value, values_equal, wrap64

if TYPE_CHECKING:
    from ..search.testcase import TestCase

DEFAULT_STEP_BUDGET = 100_000
# Subject call depth; must stay far below Python's recursion limit.
MAX_CALL_DEPTH = 64

NULL_POINTER = "NullPointerException"
ARITHMETIC = "ArithmeticException"


class SubjectThrow(Exception):
    """A subject-level exception in flight."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name


class StepBudgetExceeded(Exception):
    """Raised when a run uses more interpreter steps than it was granted."""


class _Return(Exception):
    def __init__(self, value: Value):
        super().__init__()
        self.value = value


class _Frame:
    __slots__ = ("this", "locals")

    def __init__(self, this: Optional[ObjectRef], local_values: Dict[str, Value]):
        self.this = this
        self.locals = local_values


def _java_div(left: int, right: int) -> int:
    quotient = abs(left) // abs(right)
    return quotient if (left >= 0) == (right >= 0) else -quotient


class Interpreter:
    """
    Executes methods of one SubjectProgram while recording branches and
    method entries into an ExecutionTrace.

    An instance runs one test at a time; create one per worker.
    """

    def __init__(self, program: ast.SubjectProgram, step_budget: int = DEFAULT_STEP_BUDGET):
        self.program = program
        self.step_budget = step_budget
        self.trace = ExecutionTrace()
        self._next_oid = 0
        self._depth = 0
        self._entered: Set[str] = set()

    # -- bookkeeping -------------------------------------------------------

    def _tick(self) -> None:
        self.trace.steps += 1
        if self.trace.steps > self.step_budget:
            self.trace.steps = self.step_budget
            raise StepBudgetExceeded()

    def _new_oid(self) -> int:
        oid = self._next_oid
        self._next_oid += 1
        return oid

    def _lineage(self, name: str) -> Tuple[str, ...]:
        return self.program.exception_lineage(name)

    # -- objects -----------------------------------------------------------

    def instantiate(self, unit_name: str, args: Sequence[Value]) -> Value:
        """
        Create a unit instance or a list and run its constructor.

        Raises:
            SubjectThrow: If the constructor throws
        """
        self._tick()
        if unit_name == ast.LIST:
            return ListRef([], self._new_oid())
        unit = self.program.unit(unit_name)
        if unit is None:
            raise InterpreterFault(f"Unknown unit {unit_name}")
        obj = ObjectRef(unit.name, {f.name: default_value(f.type_name) for f in unit.fields}, self._new_oid())
        ctor = unit.constructor()
        if ctor is not None:
            self.invoke_method(obj, ctor, args)
        elif args:
            raise InterpreterFault(f"{unit_name} has no constructor taking arguments")
        return obj

    def invoke(self, receiver: Value, method_name: str, args: Sequence[Value]) -> Value:
        """
        Call a method on a receiver value, including builtin list methods.

        Raises:
            SubjectThrow: NullPointerException on a null receiver, or whatever
                the method throws
        """
        if receiver is None:
            raise SubjectThrow(NULL_POINTER)
        if isinstance(receiver, ListRef):
            return self._list_call(receiver, method_name, args)
        if not isinstance(receiver, ObjectRef):
            raise InterpreterFault(f"Cannot call {method_name} on {render_value(receiver)}")
        unit = self.program.unit(receiver.unit)
        method = unit.method(method_name) if unit else None
        if method is None:
            raise InterpreterFault(f"{receiver.unit} has no method {method_name}")
        return self.invoke_method(receiver, method, args)

    def _list_call(self, target: ListRef, method_name: str, args: Sequence[Value]) -> Value:
        self._tick()
        if method_name == "add":
            target.items.append(args[0])
            return True
        if method_name == "contains":
            return any(values_equal(item, args[0]) for item in target.items)
        if method_name == "size":
            return len(target.items)
        raise InterpreterFault(f"list has no method {method_name}")

    def invoke_method(self, receiver: ObjectRef, method: ast.MethodDecl, args: Sequence[Value]) -> Value:
        if len(args) != len(method.params):
            raise InterpreterFault(f"{method.method_id} called with {len(args)} argument(s)")
        if self._depth >= MAX_CALL_DEPTH:
            raise StepBudgetExceeded()
        if method.method_id not in self._entered:
            self._entered.add(method.method_id)
            self.trace.entered.append(method.method_id)
        frame = _Frame(receiver, {p.name: a for p, a in zip(method.params, args)})
        self._depth += 1
        try:
            self._exec(method.body, frame)
        except _Return as ret:
            return ret.value
        finally:
            self._depth -= 1
        return None

    # -- statements --------------------------------------------------------

    def _exec(self, stmt: ast.Stmt, frame: _Frame) -> None:
        self._tick()
        if isinstance(stmt, ast.Block):
            for child in stmt.body:
                self._exec(child, frame)
        elif isinstance(stmt, ast.VarDecl):
            value = self._eval(stmt.init, frame) if stmt.init is not None else default_value(stmt.type_name)
            frame.locals[stmt.name] = value
        elif isinstance(stmt, ast.Assign):
            self._assign(stmt.target, self._eval(stmt.value, frame), frame)
        elif isinstance(stmt, ast.If):
            if self._branch(stmt.branch_id, stmt.cond, frame):
                self._exec(stmt.then, frame)
            elif stmt.orelse is not None:
                self._exec(stmt.orelse, frame)
        elif isinstance(stmt, ast.While):
            while self._branch(stmt.branch_id, stmt.cond, frame):
                self._exec(stmt.body, frame)
        elif isinstance(stmt, ast.Return):
            raise _Return(self._eval(stmt.value, frame) if stmt.value is not None else None)
        elif isinstance(stmt, ast.Throw):
            raise SubjectThrow(stmt.exception)
        elif isinstance(stmt, ast.ExprStmt):
            self._eval(stmt.expr, frame)
        else:
            raise InterpreterFault(f"Unsupported statement {type(stmt).__name__}")

    def _assign(self, target: ast.Expr, value: Value, frame: _Frame) -> None:
        if isinstance(target, ast.Name):
            if target.ident in frame.locals:
                frame.locals[target.ident] = value
            elif frame.this is not None and target.ident in frame.this.fields:
                frame.this.fields[target.ident] = value
            else:
                raise InterpreterFault(f"Unknown variable {target.ident}")
        elif isinstance(target, ast.FieldAccess):
            owner = self._eval(target.target, frame)
            if owner is None:
                raise SubjectThrow(NULL_POINTER)
            owner.fields[target.name] = value
        else:
            raise InterpreterFault("Invalid assignment target")

    def _branch(self, branch_id: str, cond: ast.Expr, frame: _Frame) -> bool:
        taken, to_true, to_false = self._eval_cond(cond, frame)
        distance = to_false if taken else to_true
        self.trace.branches.append(BranchRecord(branch_id, taken, distance))
        return taken

    # -- expressions -------------------------------------------------------

    def _eval_cond(self, expr: ast.Expr, frame: _Frame) -> Tuple[bool, float, float]:
        """
        Evaluate a condition with its branch distances.

        Returns:
            (value, distance to make it true, distance to make it false)
        """
        if isinstance(expr, ast.Unary) and expr.op == "!":
            value, to_true, to_false = self._eval_cond(expr.operand, frame)
            return not value, to_false, to_true
        if isinstance(expr, ast.Binary) and expr.op in ("&&", "||"):
            left, l_true, l_false = self._eval_cond(expr.left, frame)
            if expr.op == "&&":
                if not left:
                    return False, l_true + 1, 0
                right, r_true, r_false = self._eval_cond(expr.right, frame)
                return right, l_true + r_true, min(l_false, r_false)
            if left:
                return True, 0, l_false + 1
            right, r_true, r_false = self._eval_cond(expr.right, frame)
            return right, min(l_true, r_true), l_false + r_false
        if isinstance(expr, ast.Binary) and expr.op in ("<", "<=", ">", ">=", "==", "!="):
            left = self._eval(expr.left, frame)
            right = self._eval(expr.right, frame)
            value = self._compare(expr.op, left, right)
            numeric = isinstance(left, int) and isinstance(right, int) \
                and not isinstance(left, bool) and not isinstance(right, bool)
            if not numeric:
                return value, (0 if value else 1), (1 if value else 0)
            to_true, to_false = self._numeric_distances(expr.op, left, right)
            return value, to_true, to_false
        value = bool(self._eval(expr, frame))
        return value, (0 if value else 1), (1 if value else 0)

    @staticmethod
    def _numeric_distances(op: str, a: int, b: int) -> Tuple[float, float]:
        if op == "<":
            return (0 if a < b else a - b + 1), (0 if a >= b else b - a)
        if op == "<=":
            return (0 if a <= b else a - b), (0 if a > b else b - a + 1)
        if op == ">":
            return (0 if a > b else b - a + 1), (0 if a <= b else a - b)
        if op == ">=":
            return (0 if a >= b else b - a), (0 if a < b else a - b + 1)
        if op == "==":
            return abs(a - b), (0 if a != b else 1)
        return (0 if a != b else 1), abs(a - b)

    @staticmethod
    def _compare(op: str, left: Value, right: Value) -> bool:
        if op == "==":
            return values_equal(left, right)
        if op == "!=":
            return not values_equal(left, right)
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        return left >= right

    def _eval(self, expr: ast.Expr, frame: _Frame) -> Value:
        if isinstance(expr, ast.IntLit):
            return expr.value
        if isinstance(expr, ast.BoolLit):
            return expr.value
        if isinstance(expr, ast.NullLit):
            return None
        if isinstance(expr, ast.Name):
            if expr.ident in frame.locals:
                return frame.locals[expr.ident]
            if frame.this is not None and expr.ident in frame.this.fields:
                return frame.this.fields[expr.ident]
            raise InterpreterFault(f"Unknown variable {expr.ident}")
        if isinstance(expr, ast.This):
            return frame.this
        if isinstance(expr, ast.FieldAccess):
            owner = self._eval(expr.target, frame)
            if owner is None:
                raise SubjectThrow(NULL_POINTER)
            return owner.fields[expr.name]
        if isinstance(expr, ast.Call):
            return self._eval_call(expr, frame)
        if isinstance(expr, ast.New):
            args = [self._eval(a, frame) for a in expr.args]
            return self.instantiate(expr.type_name, args)
        if isinstance(expr, ast.Unary):
            operand = self._eval(expr.operand, frame)
            return (not operand) if expr.op == "!" else wrap64(-operand)
        if isinstance(expr, ast.Binary):
            return self._eval_binary(expr, frame)
        raise InterpreterFault(f"Unsupported expression {type(expr).__name__}")

    def _eval_call(self, expr: ast.Call, frame: _Frame) -> Value:
        if expr.target is None and expr.name == "log":
            self._tick()
            self.trace.logs.append(expr.args[0].value)
            return None
        receiver = frame.this if expr.target is None else self._eval(expr.target, frame)
        args = [self._eval(a, frame) for a in expr.args]
        return self.invoke(receiver, expr.name, args)

    def _eval_binary(self, expr: ast.Binary, frame: _Frame) -> Value:
        op = expr.op
        if op == "&&":
            return bool(self._eval(expr.left, frame)) and bool(self._eval(expr.right, frame))
        if op == "||":
            return bool(self._eval(expr.left, frame)) or bool(self._eval(expr.right, frame))
        left = self._eval(expr.left, frame)
        right = self._eval(expr.right, frame)
        if op in ("<", "<=", ">", ">=", "==", "!="):
            return self._compare(op, left, right)
        if op == "+":
            return wrap64(left + right)
        if op == "-":
            return wrap64(left - right)
        if op == "*":
            return wrap64(left * right)
        if right == 0:
            raise SubjectThrow(ARITHMETIC)
        quotient = _java_div(left, right)
        if op == "/":
            return wrap64(quotient)
        return wrap64(left - right * quotient)

    # -- tests -------------------------------------------------------------

    def run_test(self, test: "TestCase", snapshot_methods: Optional[FrozenSet[str]] = None) -> ExecutionTrace:
        """
        Execute a test's statements in order.

        A statement whose inputs come from a failed statement is skipped;
        independent statements still run.

        Args:
            test: The test case
            snapshot_methods: Method ids whose calls need a pre-call snapshot
                (None snapshots every call)

        Returns:
            The filled ExecutionTrace
        """
        self.trace = ExecutionTrace()
        self._entered = set()
        self._next_oid = 0
        self._depth = 0
        results: List[Value] = []
        failed = set()
        try:
            for index, stmt in enumerate(test.statements):
                refs = [a.ref for a in stmt.args if a.ref is not None]
                if stmt.receiver is not None:
                    refs.append(stmt.receiver)
                if any(r in failed for r in refs):
                    failed.add(index)
                    results.append(None)
                    self.trace.skipped.append(index)
                    continue
                if stmt.kind == "literal":
                    results.append(stmt.value)
                    continue
                args = [results[a.ref] if a.ref is not None else a.value for a in stmt.args]
                if stmt.kind == "construct":
                    method_id = f"{stmt.unit}.{stmt.unit}"
                    receiver: Value = None
                else:
                    method_id = f"{stmt.unit}.{stmt.method}"
                    receiver = results[stmt.receiver]
                wanted = snapshot_methods is None or method_id in snapshot_methods
                record = CallRecord(
                    statement_index=index,
                    method_id=method_id,
                    receiver=render_value(receiver) if stmt.kind == "call" else "",
                    args=tuple(render_value(a) for a in args),
                    snapshot=maybe_snapshot(receiver, args, wanted),
                )
                try:
                    if stmt.kind == "construct":
                        value = self.instantiate(stmt.unit, args)
                    else:
                        value = self.invoke(receiver, stmt.method, args)
                    record.set_returned(value)
                    results.append(value)
                except SubjectThrow as thrown:
                    record.set_thrown(thrown.name, self._lineage(thrown.name))
                    failed.add(index)
                    results.append(None)
                self.trace.calls.append(record)
        except (StepBudgetExceeded, RecursionError):
            self.trace.halt_reason = HALT_STEP_BUDGET
        except (InterpreterFault, KeyError, TypeError, AttributeError) as exc:
            self.trace.halt_reason = HALT_FAULT
            self.trace.fault = f"{type(exc).__name__}: {exc}"
        return self.trace


def execute_test(
    program: ast.SubjectProgram,
    test: "TestCase",
    step_budget: int = DEFAULT_STEP_BUDGET,
    snapshot_methods: Optional[FrozenSet[str]] = None,
) -> ExecutionTrace:
    """
    Run a test case against a program.

    Args:
        program: Checked subject program
        test: Well-formed test case
        step_budget: Maximum number of interpreter steps
        snapshot_methods: Method ids needing pre-call snapshots (None = all)

    Returns:
        Deterministic ExecutionTrace; `halt_reason` is "step-budget" when the
        budget ran out and "fault" on an interpreter failure
    """
    return Interpreter(program, step_budget).run_test(test, snapshot_methods)


class GuardUnevaluable(Exception):
    """A guard-side method call threw or ran out of steps."""


def invoke_isolated(
    program: ast.SubjectProgram,
    snapshot: Snapshot,
    target: Value,
    method_name: str,
    args: Sequence[Value],
    step_budget: int,
) -> Value:
    """
    Run a guard-side method call on a private copy of snapshot values.

    Args:
        program: Subject program
        snapshot: Snapshot the values were read from
        target: Receiver taken from the snapshot
        method_name: Method to call
        args: Arguments taken from the snapshot
        step_budget: Dedicated guard step budget

    Returns:
        The value returned by the call

    Raises:
        GuardUnevaluable: If the call throws, faults or exceeds its budget
    """
    copied = snapshot.isolated([target] + list(args))
    interpreter = Interpreter(program, step_budget)
    try:
        return interpreter.invoke(copied[0], method_name, list(copied[1:]))
    except (SubjectThrow, StepBudgetExceeded, InterpreterFault, RecursionError) as exc:
        raise GuardUnevaluable(str(exc)) from exc
