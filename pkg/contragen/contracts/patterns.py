"""
Loading and matching of the condition pattern table.
"""
import os
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

DEFAULT_PATTERN_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "patterns.txt")

SLOT_REGEX = {
    "X": r"[a-z_][a-z0-9_]*",
    "Y": r"[a-z_][a-z0-9_]*",
    "N": r"-?\d+|[a-z_][a-z0-9_]*",
    "VERB": r"[a-z]+",
    "ADJ": r"[a-z]+",
}

TEMPLATE_OPS = ("<=", ">=", "!=", "<", ">", "=")

_PATTERN_PART_RE = re.compile(r"(\{[A-Z]+\}|\([^)]*\))")
_CALL_RE = re.compile(r"^\{(?P<receiver>[A-Z]+)\}\.(?P<name>[A-Za-z{}]+)\((?P<args>[^)]*)\)$")
_SLOT_RE = re.compile(r"^\{(?P<slot>[A-Z]+)\}$")


class PatternTableError(ValueError):
    """Raised for malformed lines in a pattern table file."""


@dataclass(frozen=True)
class Operand:
    """
    One side of a term template.

    kind is "slot", "literal" or "call"; `name` holds the slot name, the
    method-name template (e.g. `is{ADJ}`) or is empty for literals.
    """

    kind: str
    name: str = ""
    value: Union[int, bool, None] = None
    receiver: str = ""
    args: Tuple["Operand", ...] = ()


@dataclass(frozen=True)
class TermTemplate:
    lhs: Operand
    op: str
    rhs: Operand


@dataclass(frozen=True)
class PatternRule:
    """A compiled `PATTERN => TERM-TEMPLATE` line."""

    pattern: str
    template: TermTemplate
    low_confidence: bool
    regex: "re.Pattern"
    line: int
    words: Tuple[str, ...]

    def match(self, clause: str) -> Optional[Dict[str, str]]:
        found = self.regex.fullmatch(clause)
        return found.groupdict() if found else None


def _compile_pattern(pattern: str, line: int) -> Tuple["re.Pattern", Tuple[str, ...]]:
    parts = []
    words: List[str] = []
    seen = set()
    for piece in _PATTERN_PART_RE.split(re.sub(r"\s+", " ", pattern.strip())):
        if not piece:
            continue
        slot = _SLOT_RE.match(piece)
        if slot:
            name = slot.group("slot")
            if name not in SLOT_REGEX:
                raise PatternTableError(f"line {line}: unknown slot {{{name}}}")
            if name in seen:
                raise PatternTableError(f"line {line}: slot {{{name}}} used twice")
            seen.add(name)
            parts.append(f"(?P<{name}>{SLOT_REGEX[name]})")
        elif piece.startswith("("):
            options = [o.strip() for o in piece[1:-1].split("|")]
            for option in options:
                words.extend(option.split())
            parts.append("(?:" + "|".join(re.escape(o) for o in options) + ")")
        else:
            words.extend(piece.split())
            parts.append(re.escape(piece))
    return re.compile("".join(parts)), tuple(words)


def _parse_operand(text: str, line: int) -> Operand:
    text = text.strip()
    slot = _SLOT_RE.match(text)
    if slot:
        return Operand(kind="slot", name=slot.group("slot"))
    call = _CALL_RE.match(text)
    if call:
        args = tuple(_parse_operand(a, line) for a in call.group("args").split(",") if a.strip())
        return Operand(kind="call", name=call.group("name"), receiver=call.group("receiver"), args=args)
    if text in ("true", "false"):
        return Operand(kind="literal", value=text == "true")
    if text == "null":
        return Operand(kind="literal", value=None)
    if re.fullmatch(r"-?\d+", text):
        return Operand(kind="literal", value=int(text))
    raise PatternTableError(f"line {line}: cannot parse template operand '{text}'")


def _parse_template(text: str, line: int) -> TermTemplate:
    for op in TEMPLATE_OPS:
        match = re.match(rf"^(?P<lhs>.+?)\s+{re.escape(op)}\s+(?P<rhs>.+)$", text.strip())
        if match:
            return TermTemplate(_parse_operand(match.group("lhs"), line), op, _parse_operand(match.group("rhs"), line))
    raise PatternTableError(f"line {line}: template '{text}' has no comparison operator")


def parse_rule(text: str, line: int = 0) -> PatternRule:
    """
    Compile one table line.

    Args:
        text: `PATTERN => TERM-TEMPLATE`, optionally ending in `[low]`
        line: Line number for diagnostics

    Returns:
        The compiled rule

    Raises:
        PatternTableError: If the line is malformed
    """
    if "=>" not in text:
        raise PatternTableError(f"line {line}: missing '=>'")
    pattern, _, template = text.partition("=>")
    template = template.strip()
    low = template.endswith("[low]")
    if low:
        template = template[: -len("[low]")].strip()
    regex, words = _compile_pattern(pattern, line)
    return PatternRule(
        pattern=pattern.strip(),
        template=_parse_template(template, line),
        low_confidence=low,
        regex=regex,
        line=line,
        words=words,
    )


def parse_table(text: str) -> List[PatternRule]:
    rules = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rules.append(parse_rule(line, number))
    return rules


_cache: Dict[str, List[PatternRule]] = {}


def load_patterns(path: Optional[str] = None) -> List[PatternRule]:
    """
    Load a pattern table, defaulting to the one shipped with the package.

    Tables are cached per path.

    Args:
        path: Optional path to a user-supplied table

    Returns:
        Rules in file order
    """
    path = os.path.abspath(path or DEFAULT_PATTERN_FILE)
    if path not in _cache:
        with open(path, "r", encoding="utf-8") as f:
            _cache[path] = parse_table(f.read())
    return _cache[path]
