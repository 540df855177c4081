"""
Runtime values of the subject language.

Integers are Python ints kept inside the signed 64-bit range, booleans are
Python bools and `null` is None. Objects and lists are reference values
compared by identity.
"""
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1


class ObjectRef:
    """An instance of a subject unit."""

    __slots__ = ("unit", "fields", "oid")

    def __init__(self, unit: str, fields: Dict[str, Any], oid: int):
        self.unit = unit
        self.fields = fields
        self.oid = oid

    def __repr__(self) -> str:
        return f"{self.unit}#{self.oid}"


class ListRef:
    """The builtin growable list."""

    __slots__ = ("items", "oid")

    def __init__(self, items: Optional[List[Any]] = None, oid: int = 0):
        self.items = items if items is not None else []
        self.oid = oid

    def __repr__(self) -> str:
        return f"list#{self.oid}"


Value = Union[int, bool, None, ObjectRef, ListRef]


def is_reference(value: Any) -> bool:
    return isinstance(value, (ObjectRef, ListRef))


def values_equal(left: Value, right: Value) -> bool:
    """
    Subject-level `==`.

    References compare by identity and null equals only null.
    """
    if left is None or right is None:
        return left is right
    if is_reference(left) or is_reference(right):
        return left is right
    if isinstance(left, bool) != isinstance(right, bool):
        return False
    return left == right


def wrap64(value: int) -> int:
    """Wrap an integer into the signed 64-bit range."""
    if INT_MIN <= value <= INT_MAX:
        return value
    return (value - INT_MIN) % (2 ** 64) + INT_MIN


def default_value(type_name: str) -> Value:
    if type_name == "int":
        return 0
    if type_name == "bool":
        return False
    return None


def render_value(value: Any) -> str:
    """
    Deterministic text form used in traces and emitted tests.
    """
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(value)


def copy_graph(values: Sequence[Any], memo: Dict[int, Any], keep: List[Any]) -> Tuple[Any, ...]:
    """
    Copy the object graph reachable from `values`.

    Every reference is copied once, so aliasing inside and across the values
    is preserved. `memo` maps `id(original)` to its copy and `keep` holds the
    originals so those ids stay unique while the memo is in use.
    """
    pending: List[Tuple[Any, Any]] = []

    def shell(value: Any) -> Any:
        if not isinstance(value, (ObjectRef, ListRef)):
            return value
        copied = memo.get(id(value))
        if copied is None:
            if isinstance(value, ObjectRef):
                copied = ObjectRef(value.unit, {}, value.oid)
            else:
                copied = ListRef([], value.oid)
            memo[id(value)] = copied
            keep.append(value)
            pending.append((value, copied))
        return copied

    result = tuple(shell(v) for v in values)
    while pending:
        original, copied = pending.pop()
        if isinstance(original, ObjectRef):
            copied.fields = {name: shell(v) for name, v in original.fields.items()}
        else:
            copied.items = [shell(v) for v in original.items]
    return result
