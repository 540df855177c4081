"""
Turning a selected test into an emitted test with its contract oracle.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from ..contracts.model import (
    EXCEPTION_TYPE,
    CallPred,
    CExpr,
    CLiteral,
    Contract,
    ExceptionName,
    FieldRef,
    Negation,
    ParamRef,
    RetVal,
    Term,
)
from ..lang.values import render_value
from ..search.selection import VIOLATING
from ..search.testcase import TestCase

PASS = "pass"
ALARM = "alarm"

_DIALECT_OPS = {"=": "==", "!=": "!="}


class FocalContractMismatch(ValueError):
    """The test was selected for a different contract."""


@dataclass
class EmittedTest:
    """
    A test contextualized on its focal contract.

    `lines` is the rendered body in the subject test dialect.
    """

    name: str
    focal_contract: str
    outcome: str
    expected: str
    test: TestCase
    lines: List[str] = field(default_factory=list)
    contract: Optional[Contract] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "focal_contract": self.focal_contract,
            "outcome": self.outcome,
            "expected": self.expected,
            "lines": list(self.lines),
            "test": self.test.to_dict(),
            "guard": self.contract.guard_text if self.contract else "",
            "assertion": self.contract.assert_text if self.contract else "",
        }


class OracleRenderer:
    """
    Renders contract expressions as subject-dialect expressions for one
    test's focal call.
    """

    def __init__(self, test: TestCase):
        if test.focal_index is None:
            raise ValueError("Test has no focal call")
        self.test = test
        self.names = test.variable_names()
        self.focal = test.statements[test.focal_index]

    def arg(self, index: int) -> str:
        arg = self.focal.args[index]
        return self.names[arg.ref] if arg.is_ref else render_value(arg.value)

    @property
    def receiver(self) -> str:
        return self.names[self.focal.receiver] if self.focal.receiver is not None else "this"

    @property
    def result(self) -> str:
        return self.names[self.test.focal_index] or "result"

    def expr(self, expr: CExpr) -> str:
        if isinstance(expr, CLiteral):
            return render_value(expr.value)
        if isinstance(expr, ParamRef):
            return self.arg(expr.index)
        if isinstance(expr, FieldRef):
            return f"{self.receiver}.{expr.name}"
        if isinstance(expr, CallPred):
            args = ", ".join(self.expr(a) for a in expr.args)
            return f"{self.expr(expr.receiver)}.{expr.method}({args})"
        if isinstance(expr, RetVal):
            return self.result
        if isinstance(expr, ExceptionName):
            return expr.name
        if isinstance(expr, Negation):
            return f"!({' && '.join(self.term(t) for t in expr.terms)})"
        raise ValueError(f"Cannot render {expr!r}")

    def term(self, term: Term) -> str:
        lhs, rhs = self.expr(term.lhs), self.expr(term.rhs)
        if term.kind == EXCEPTION_TYPE:
            return f"{lhs} instanceof {rhs}"
        return f"{lhs} {_DIALECT_OPS.get(term.op, term.op)} {rhs}"

    def assertion(self, term: Term) -> str:
        """Value assertion macro for one term on the focal result."""
        result = self.result
        if isinstance(term.lhs, RetVal) and isinstance(term.rhs, CLiteral):
            value = term.rhs.value
            if term.op in ("=", "!="):
                positive = term.op == "="
                if value is True or value is False:
                    return f"assertTrue({result});" if value == positive else f"assertFalse({result});"
                if value is None:
                    return f"assertNull({result});" if positive else f"assertNotNull({result});"
        if isinstance(term.lhs, RetVal) and term.op in ("=", "!="):
            macro = "assertEquals" if term.op == "=" else "assertNotEquals"
            return f"{macro}({self.expr(term.rhs)}, {result});"
        return f"assertTrue({self.term(term)});"


def attach_oracle(
    test: TestCase,
    contract: Contract,
    outcome: str,
    name: str,
    preconditions: Sequence[Contract] = (),
    assume_oracles: bool = False,
) -> EmittedTest:
    """
    Render a test with the assertion of its focal contract.

    Args:
        test: Minimized test with `focal_contract` and `focal_index` set
        contract: The focal contract
        outcome: "violating" or "satisfying"
        name: Test name
        preconditions: Preconditions of the target method, for assume oracles
        assume_oracles: Render preconditions and guard as `assume(...)` lines

    Returns:
        EmittedTest expected to fail at the oracle (violating) or pass

    Raises:
        FocalContractMismatch: If the test was selected for another contract
    """
    if test.focal_contract != contract.id:
        raise FocalContractMismatch(
            f"Test focal contract {test.focal_contract!r} does not match {contract.id!r}"
        )
    renderer = OracleRenderer(test)
    rendered = test.render_statements()
    focal = test.focal_index
    lines = list(rendered[:focal])
    if assume_oracles:
        for pre in preconditions:
            lines.extend(f"assume({renderer.term(t)});" for t in pre.guard_terms)
        lines.extend(f"assume({renderer.term(t)});" for t in contract.guard_terms)
    if contract.asserts_exception:
        exception = next(t.rhs.to_sexpr() for t in contract.assert_terms if t.kind == EXCEPTION_TYPE)
        lines.append("try {")
        lines.append(f"    {rendered[focal]}")
        lines.append(f'    fail("Expected {exception}");')
        lines.append(f"}} catch ({exception} e) {{")
        lines.append("    // expected")
        lines.append("}")
    else:
        lines.append(rendered[focal])
        lines.extend(renderer.assertion(t) for t in contract.assert_terms)
    lines.extend(rendered[focal + 1:])
    expected = ALARM if outcome == VIOLATING else PASS
    return EmittedTest(name, contract.id, outcome, expected, test, lines, contract)
