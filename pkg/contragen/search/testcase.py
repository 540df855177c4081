"""
Test case chromosome: an ordered list of constructions, calls and literals.
"""
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ..lang.values import render_value

LITERAL = "literal"
CONSTRUCT = "construct"
CALL = "call"


@dataclass(frozen=True)
class Arg:
    """
    A statement argument: either a reference to an earlier statement's
    result or an inline literal (int, bool or null).
    """

    ref: Optional[int] = None
    value: Any = None

    @classmethod
    def of_ref(cls, index: int) -> "Arg":
        return cls(ref=index)

    @classmethod
    def literal(cls, value: Any) -> "Arg":
        return cls(value=value)

    @property
    def is_ref(self) -> bool:
        return self.ref is not None

    def to_dict(self) -> Dict[str, Any]:
        return {"ref": self.ref} if self.is_ref else {"value": self.value}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Arg":
        return cls(ref=data["ref"]) if "ref" in data else cls(value=data.get("value"))


@dataclass(frozen=True)
class Statement:
    """
    One test statement.

    `type_name` is the static type of the statement's result (`void` for
    calls returning nothing).
    """

    kind: str
    type_name: str
    unit: str = ""
    method: str = ""
    receiver: Optional[int] = None
    args: Tuple[Arg, ...] = ()
    value: Any = None

    @classmethod
    def literal_of(cls, type_name: str, value: Any) -> "Statement":
        return cls(kind=LITERAL, type_name=type_name, value=value)

    @classmethod
    def construct(cls, unit: str, args: Tuple[Arg, ...]) -> "Statement":
        return cls(kind=CONSTRUCT, type_name=unit, unit=unit, method=unit, args=tuple(args))

    @classmethod
    def call(cls, unit: str, method: str, receiver: int, args: Tuple[Arg, ...], return_type: str) -> "Statement":
        return cls(kind=CALL, type_name=return_type, unit=unit, method=method, receiver=receiver, args=tuple(args))

    @property
    def method_id(self) -> str:
        return f"{self.unit}.{self.method}" if self.kind != LITERAL else ""

    @property
    def produces_value(self) -> bool:
        return self.type_name != "void"

    def references(self) -> List[int]:
        refs = [a.ref for a in self.args if a.ref is not None]
        if self.receiver is not None:
            refs.append(self.receiver)
        return refs

    def remap(self, mapping: Dict[int, int]) -> "Statement":
        """Return a copy with statement references renumbered through `mapping`."""
        args = tuple(Arg.of_ref(mapping[a.ref]) if a.is_ref else a for a in self.args)
        receiver = mapping[self.receiver] if self.receiver is not None else None
        return Statement(self.kind, self.type_name, self.unit, self.method, receiver, args, self.value)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind, "type": self.type_name}
        if self.kind == LITERAL:
            data["value"] = self.value
        else:
            data["unit"] = self.unit
            data["method"] = self.method
            data["args"] = [a.to_dict() for a in self.args]
            if self.receiver is not None:
                data["receiver"] = self.receiver
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Statement":
        return cls(
            kind=data["kind"],
            type_name=data["type"],
            unit=data.get("unit", ""),
            method=data.get("method", ""),
            receiver=data.get("receiver"),
            args=tuple(Arg.from_dict(a) for a in data.get("args", [])),
            value=data.get("value"),
        )


def variable_prefix(type_name: str) -> str:
    """
    Short variable prefix for a type: `GiftPack` -> `gp`, `int` -> `i`.
    """
    if type_name == "list":
        return "l"
    capitals = re.findall(r"[A-Z]", type_name)
    if capitals:
        return "".join(capitals).lower()
    return type_name[:1].lower() or "v"


@dataclass
class TestCase:
    """A candidate test: statements plus the contract it is emitted for."""

    statements: List[Statement] = field(default_factory=list)
    focal_contract: Optional[str] = None
    focal_index: Optional[int] = None

    __test__ = False

    def __len__(self) -> int:
        return len(self.statements)

    def copy(self) -> "TestCase":
        return TestCase(list(self.statements), self.focal_contract, self.focal_index)

    def serialize(self) -> str:
        """
        Canonical text form; used as the tie-breaker wherever two tests
        compare equal on fitness.
        """
        lines = []
        for index, stmt in enumerate(self.statements):
            if stmt.kind == LITERAL:
                lines.append(f"{index}:{stmt.type_name}={render_value(stmt.value)}")
                continue
            args = ",".join(f"@{a.ref}" if a.is_ref else render_value(a.value) for a in stmt.args)
            receiver = "" if stmt.receiver is None else f"@{stmt.receiver}."
            lines.append(f"{index}:{receiver}{stmt.method_id}({args})")
        return ";".join(lines)

    def variable_names(self) -> List[Optional[str]]:
        counters: Dict[str, int] = {}
        names: List[Optional[str]] = []
        for stmt in self.statements:
            if not stmt.produces_value:
                names.append(None)
                continue
            prefix = variable_prefix(stmt.type_name)
            names.append(f"{prefix}{counters.get(prefix, 0)}")
            counters[prefix] = counters.get(prefix, 0) + 1
        return names

    def render_statements(self) -> List[str]:
        """
        Render statements in the subject test dialect, e.g.
        `bool b0 = gp0.unwrapAndSave(d0, 153);`.
        """
        names = self.variable_names()
        lines = []
        for index, stmt in enumerate(self.statements):
            if stmt.kind == LITERAL:
                lines.append(f"{stmt.type_name} {names[index]} = {render_value(stmt.value)};")
                continue
            args = ", ".join(names[a.ref] if a.is_ref else render_value(a.value) for a in stmt.args)
            if stmt.kind == CONSTRUCT:
                expr = f"new {stmt.unit}({args})"
            else:
                expr = f"{names[stmt.receiver]}.{stmt.method}({args})"
            if stmt.produces_value:
                lines.append(f"{stmt.type_name} {names[index]} = {expr};")
            else:
                lines.append(f"{expr};")
        return lines

    def without(self, index: int) -> Optional["TestCase"]:
        """
        Drop one statement.

        Returns:
            The shorter test, or None when a later statement uses the result
        """
        if any(index in s.references() for s in self.statements[index + 1:]):
            return None
        if self.focal_index == index:
            return None
        mapping = {i: (i if i < index else i - 1) for i in range(len(self.statements)) if i != index}
        statements = [s.remap(mapping) for i, s in enumerate(self.statements) if i != index]
        focal = self.focal_index
        if focal is not None and focal > index:
            focal -= 1
        return TestCase(statements, self.focal_contract, focal)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "statements": [s.to_dict() for s in self.statements],
            "focal_contract": self.focal_contract,
            "focal_index": self.focal_index,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TestCase":
        return cls(
            statements=[Statement.from_dict(s) for s in data.get("statements", [])],
            focal_contract=data.get("focal_contract"),
            focal_index=data.get("focal_index"),
        )
