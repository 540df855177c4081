"""
Contract data model: expressions, terms, contracts and skip records.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

PRECONDITION = "precondition"
POSTCONDITION = "postcondition"

NUMERIC = "numeric"
BOOLEAN = "boolean"
REFERENCE = "reference"
EXCEPTION_TYPE = "exception-type"

HIGH = "high"
LOW = "low"

INSTANCEOF = "instanceof"
NOT_INSTANCEOF = "not instanceof"

NEGATED_OPS = {
    "<": ">=",
    "<=": ">",
    ">": "<=",
    ">=": "<",
    "=": "!=",
    "!=": "=",
    INSTANCEOF: NOT_INSTANCEOF,
    NOT_INSTANCEOF: INSTANCEOF,
}

_SEXPR_LITERALS = {True: "true", False: "false", None: "null"}


def _literal_text(value: Any) -> str:
    if value is None or isinstance(value, bool):
        return _SEXPR_LITERALS[value]
    return str(value)


class CExpr:
    """Base class of contract expressions."""

    type_name = "any"

    def to_sexpr(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.to_sexpr()


@dataclass(frozen=True, repr=False)
class CLiteral(CExpr):
    value: Any
    type_name: str = "int"

    def to_sexpr(self) -> str:
        return _literal_text(self.value)


@dataclass(frozen=True, repr=False)
class ParamRef(CExpr):
    name: str
    index: int
    type_name: str

    def to_sexpr(self) -> str:
        return self.name


@dataclass(frozen=True, repr=False)
class FieldRef(CExpr):
    name: str
    type_name: str

    def to_sexpr(self) -> str:
        return f"this.{self.name}"


@dataclass(frozen=True, repr=False)
class CallPred(CExpr):
    """A side-condition call such as `drawer.exceeds(limit)`."""

    receiver: CExpr
    method: str
    args: Tuple[CExpr, ...]
    type_name: str

    def to_sexpr(self) -> str:
        parts = ["call", self.receiver.to_sexpr(), self.method] + [a.to_sexpr() for a in self.args]
        return f"({' '.join(parts)})"


@dataclass(frozen=True, repr=False)
class Negation(CExpr):
    """Wrapped negation of a conjunction of terms."""

    terms: Tuple["Term", ...]
    type_name: str = "bool"

    def to_sexpr(self) -> str:
        inner = " ".join(t.to_sexpr() for t in self.terms)
        if len(self.terms) > 1:
            inner = f"(and {inner})"
        return f"(not {inner})"


@dataclass(frozen=True, repr=False)
class RetVal(CExpr):
    type_name: str = "any"

    def to_sexpr(self) -> str:
        return "retVal"


@dataclass(frozen=True, repr=False)
class ExceptionName(CExpr):
    name: str
    type_name: str = "exception"

    def to_sexpr(self) -> str:
        return self.name


@dataclass(frozen=True)
class Term:
    """An atomic comparison `lhs op rhs`."""

    lhs: CExpr
    op: str
    rhs: CExpr
    kind: str

    def negate(self) -> "Term":
        return Term(self.lhs, NEGATED_OPS[self.op], self.rhs, self.kind)

    @property
    def mentions_retval(self) -> bool:
        return isinstance(self.lhs, RetVal) or isinstance(self.rhs, RetVal)

    def to_sexpr(self) -> str:
        return f"({self.op} {self.lhs.to_sexpr()} {self.rhs.to_sexpr()})"

    def __repr__(self) -> str:
        return self.to_sexpr()


@dataclass(frozen=True)
class Contract:
    """
    A precondition or a guard-implies-assertion postcondition for one method.
    """

    id: str
    target_method: str
    kind: str
    guard_terms: Tuple[Term, ...]
    assert_terms: Tuple[Term, ...] = ()
    source_tag: str = ""
    guard_text: str = ""
    assert_text: str = ""
    confidence: str = HIGH

    @property
    def is_precondition(self) -> bool:
        return self.kind == PRECONDITION

    @property
    def method_name(self) -> str:
        return self.target_method.partition(".")[2]

    @property
    def asserts_exception(self) -> bool:
        return any(t.kind == EXCEPTION_TYPE for t in self.assert_terms)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "method": self.target_method,
            "kind": self.kind,
            "guard": [t.to_sexpr() for t in self.guard_terms],
            "assert": [t.to_sexpr() for t in self.assert_terms],
            "source": self.source_tag,
            "guard_text": self.guard_text,
            "assert_text": self.assert_text,
            "confidence": self.confidence,
        }


@dataclass(frozen=True)
class SkipRecord:
    """A doc tag that could not be turned into a contract."""

    method_id: str
    tag: str
    text: str
    reason: str
    span: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method_id,
            "tag": self.tag,
            "text": self.text,
            "reason": self.reason,
            "span": self.span,
        }


@dataclass
class ExtractionResult:
    contracts: List[Contract] = field(default_factory=list)
    skipped: List[SkipRecord] = field(default_factory=list)

    def extend(self, other: "ExtractionResult") -> None:
        self.contracts.extend(other.contracts)
        self.skipped.extend(other.skipped)

    def preconditions_of(self, method_id: str) -> List[Contract]:
        return [c for c in self.contracts if c.is_precondition and c.target_method == method_id]

    def postconditions(self) -> List[Contract]:
        return [c for c in self.contracts if not c.is_precondition]

    def by_id(self, contract_id: str) -> Optional[Contract]:
        for contract in self.contracts:
            if contract.id == contract_id:
                return contract
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "contracts": [c.to_dict() for c in self.contracts],
            "skipped": [s.to_dict() for s in self.skipped],
        }
