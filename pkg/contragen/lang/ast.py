"""
Syntax tree of the subject language.

Nodes are immutable; a parsed SubjectProgram can be shared freely between
interpreter instances.
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .errors import Position

INT = "int"
BOOL = "bool"
LIST = "list"
VOID = "void"
NULL = "null"

PRIMITIVE_TYPES = frozenset({INT, BOOL})
BUILTIN_TYPES = frozenset({INT, BOOL, LIST})
BUILTIN_EXCEPTIONS = frozenset({"NullPointerException", "ArithmeticException"})

# Builtin list methods: name -> (parameter types, return type). "any" accepts every value.
LIST_METHODS: Dict[str, Tuple[Tuple[str, ...], str]] = {
    "add": (("any",), BOOL),
    "contains": (("any",), BOOL),
    "size": ((), INT),
}


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    pos: Position


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class NullLit(Expr):
    pass


@dataclass(frozen=True)
class StrLit(Expr):
    value: str


@dataclass(frozen=True)
class Name(Expr):
    ident: str


@dataclass(frozen=True)
class This(Expr):
    pass


@dataclass(frozen=True)
class FieldAccess(Expr):
    target: Expr
    name: str


@dataclass(frozen=True)
class Call(Expr):
    target: Optional[Expr]
    name: str
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class New(Expr):
    type_name: str
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stmt:
    pos: Position


@dataclass(frozen=True)
class Block(Stmt):
    body: Tuple[Stmt, ...]


@dataclass(frozen=True)
class VarDecl(Stmt):
    type_name: str
    name: str
    init: Optional[Expr]


@dataclass(frozen=True)
class Assign(Stmt):
    target: Expr
    value: Expr


@dataclass(frozen=True)
class If(Stmt):
    branch_id: str
    cond: Expr
    then: Stmt
    orelse: Optional[Stmt]


@dataclass(frozen=True)
class While(Stmt):
    branch_id: str
    cond: Expr
    body: Stmt


@dataclass(frozen=True)
class Return(Stmt):
    value: Optional[Expr]


@dataclass(frozen=True)
class Throw(Stmt):
    exception: str


@dataclass(frozen=True)
class ExprStmt(Stmt):
    expr: Expr


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DocTag:
    """One `@tag` entry of a doc comment."""

    name: str
    arg: Optional[str]
    text: str
    line: int


@dataclass(frozen=True)
class DocComment:
    raw: str
    description: str
    tags: Tuple[DocTag, ...]
    pos: Position


@dataclass(frozen=True)
class Param:
    name: str
    type_name: str
    pos: Position


@dataclass(frozen=True)
class FieldDecl:
    name: str
    type_name: str
    pos: Position


@dataclass(frozen=True)
class MethodDecl:
    name: str
    unit: str
    params: Tuple[Param, ...]
    return_type: str
    body: Block
    doc: Optional[DocComment]
    declared_throws: Tuple[str, ...]
    is_constructor: bool
    pos: Position
    branch_ids: Tuple[str, ...] = ()

    @property
    def method_id(self) -> str:
        return f"{self.unit}.{self.name}"

    @property
    def param_types(self) -> Tuple[str, ...]:
        return tuple(p.type_name for p in self.params)


@dataclass(frozen=True)
class UnitDecl:
    name: str
    fields: Tuple[FieldDecl, ...]
    constructors: Tuple[MethodDecl, ...]
    methods: Tuple[MethodDecl, ...]
    pos: Position

    def field_type(self, name: str) -> Optional[str]:
        for f in self.fields:
            if f.name == name:
                return f.type_name
        return None

    def method(self, name: str) -> Optional[MethodDecl]:
        for m in self.methods:
            if m.name == name:
                return m
        return None

    def constructor(self) -> Optional[MethodDecl]:
        return self.constructors[0] if self.constructors else None


@dataclass(frozen=True)
class ExceptionDecl:
    name: str
    parent: Optional[str]
    pos: Position


@dataclass(frozen=True)
class SubjectProgram:
    """A parsed and checked compilation unit."""

    units: Tuple[UnitDecl, ...]
    exceptions: Tuple[ExceptionDecl, ...] = ()
    builtin_exceptions: FrozenSet[str] = BUILTIN_EXCEPTIONS
    source_name: str = "<source>"
    _unit_index: Dict[str, UnitDecl] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        self._unit_index.update({u.name: u for u in self.units})

    def unit(self, name: str) -> Optional[UnitDecl]:
        return self._unit_index.get(name)

    def is_unit(self, type_name: str) -> bool:
        return type_name in self._unit_index

    def exception_names(self) -> FrozenSet[str]:
        return frozenset(e.name for e in self.exceptions) | self.builtin_exceptions

    def exception_lineage(self, name: str) -> Tuple[str, ...]:
        """
        Return the exception name followed by its declared ancestors.

        Args:
            name: Exception identifier

        Returns:
            Tuple starting with `name`
        """
        parents = {e.name: e.parent for e in self.exceptions}
        lineage = [name]
        current = parents.get(name)
        while current and current not in lineage:
            lineage.append(current)
            current = parents.get(current)
        return tuple(lineage)

    def method(self, method_id: str) -> Optional[MethodDecl]:
        unit_name, _, method_name = method_id.partition(".")
        unit = self.unit(unit_name)
        if unit is None:
            return None
        if method_name == unit_name:
            return unit.constructor()
        return unit.method(method_name)

    def all_methods(self) -> List[MethodDecl]:
        result: List[MethodDecl] = []
        for unit in self.units:
            result.extend(unit.constructors)
            result.extend(unit.methods)
        return result

    def all_branch_ids(self) -> List[str]:
        ids: List[str] = []
        for method in self.all_methods():
            ids.extend(method.branch_ids)
        return ids


def is_reference_type(type_name: str) -> bool:
    return type_name not in PRIMITIVE_TYPES and type_name != VOID


def assignable(source: str, target: str) -> bool:
    """
    Whether a value of static type `source` may flow into `target`.
    """
    if target == "any" or source == target:
        return True
    if source == NULL:
        return is_reference_type(target)
    return False
