"""
Rule-based translation of restricted-English conditions into terms.
"""
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from ..lang import ast
from .model import (
    BOOLEAN,
    HIGH,
    LOW,
    NUMERIC,
    REFERENCE,
    CallPred,
    CExpr,
    CLiteral,
    FieldRef,
    ParamRef,
    Term,
)
from .patterns import Operand, PatternRule, load_patterns

ARTICLES = frozenset({"the", "a", "an"})
RELATIONAL_OPS = frozenset({"<", "<=", ">", ">="})


@dataclass
class TranslationScope:
    """What a condition may mention: the method signature, the receiver's
    fields and the program's declared methods."""

    program: ast.SubjectProgram
    method: ast.MethodDecl

    @property
    def unit(self) -> ast.UnitDecl:
        return self.program.unit(self.method.unit)

    def resolve_identifier(self, word: str) -> Optional[CExpr]:
        lowered = word.lower()
        for index, param in enumerate(self.method.params):
            if param.name.lower() == lowered:
                return ParamRef(param.name, index, param.type_name)
        for f in self.unit.fields:
            if f.name.lower() == lowered:
                return FieldRef(f.name, f.type_name)
        return None

    def is_identifier(self, word: str) -> bool:
        return self.resolve_identifier(word) is not None

    def identifier_names(self) -> FrozenSet[str]:
        names = [p.name for p in self.method.params] + [f.name for f in self.unit.fields]
        return frozenset(name.lower() for name in names)

    def resolve_value(self, word: str) -> Optional[CExpr]:
        """Resolve a literal or identifier mentioned as a value."""
        lowered = word.lower()
        if lowered in ("true", "false"):
            return CLiteral(lowered == "true", ast.BOOL)
        if lowered == "null":
            return CLiteral(None, ast.NULL)
        if re.fullmatch(r"-?\d+", lowered):
            return CLiteral(int(lowered), ast.INT)
        return self.resolve_identifier(word)


@dataclass
class Translation:
    terms: List[Term]
    confidence: str = HIGH


@dataclass
class Untranslatable:
    span: str
    reason: str


TranslationOutcome = Union[Translation, Untranslatable]


def normalize_text(text: str, identifiers: FrozenSet[str] = frozenset()) -> str:
    """
    Lower-case a condition, drop articles and punctuation noise.

    An article that is also the name of a parameter or field is kept unless
    another identifier follows it ("a is at most m" keeps `a`).
    """
    text = text.strip().rstrip(".").lower()
    text = re.sub(r"[-,;:]", " ", text)
    words = text.split()
    kept = []
    for i, word in enumerate(words):
        if word in ARTICLES:
            following = words[i + 1] if i + 1 < len(words) else None
            if word not in identifiers or following in identifiers:
                continue
        kept.append(word)
    return " ".join(kept)


def _strip_suffix(word: str) -> str:
    if word.endswith("es") and len(word) > 3:
        return word[:-2]
    if word.endswith("s") and len(word) > 2:
        return word[:-1]
    return word


def _match_verb(verb: str, method_name: str) -> Optional[str]:
    """
    Compare a verb from the text with a method name.

    Returns:
        HIGH for an exact match, LOW for an s/es-stripped match, None otherwise
    """
    name = method_name.lower()
    if name == verb:
        return HIGH
    candidates = {verb, _strip_suffix(verb), verb + "s", verb + "es"}
    if name in candidates or _strip_suffix(name) in candidates:
        return LOW
    return None


def _term_kind(op: str, lhs: CExpr, rhs: CExpr) -> Optional[str]:
    types = {lhs.type_name, rhs.type_name}
    if op in RELATIONAL_OPS:
        return NUMERIC if types == {ast.INT} else None
    if ast.NULL in types:
        other = (types - {ast.NULL}) or {ast.NULL}
        return REFERENCE if all(ast.is_reference_type(t) for t in other) else None
    if types == {ast.INT}:
        return NUMERIC
    if types == {ast.BOOL}:
        return BOOLEAN
    if len(types) == 1 and ast.is_reference_type(next(iter(types))):
        return REFERENCE
    return None


class ConditionTranslator:
    """
    Turns one condition text into a conjunction of terms using a pattern table.
    """

    def __init__(self, rules: Optional[Sequence[PatternRule]] = None):
        self.rules = list(rules) if rules is not None else load_patterns()
        self._keywords = frozenset(w for rule in self.rules for w in rule.words)

    def translate(self, text: str, scope: TranslationScope, subject: Optional[str] = None) -> TranslationOutcome:
        """
        Translate a condition.

        Args:
            text: Restricted-English condition, e.g. "the drawer exceeds the limit"
            scope: Identifiers and methods the condition may mention
            subject: Implicit subject for clauses like "must be positive"

        Returns:
            Translation with the conjunction's terms, or Untranslatable with
            the first token span no rule could account for
        """
        normalized = normalize_text(text, scope.identifier_names())
        if not normalized:
            return Untranslatable(span="", reason="empty condition")
        terms: List[Term] = []
        confidence = HIGH
        for clause in normalized.split(" and "):
            clause = clause.strip()
            if subject and clause and not scope.is_identifier(clause.split()[0]):
                clause = f"{subject.lower()} {clause}"
            result = self._translate_clause(clause, scope)
            if isinstance(result, Untranslatable):
                return result
            terms.append(result[0])
            if result[1] == LOW:
                confidence = LOW
        return Translation(terms=terms, confidence=confidence)

    def _translate_clause(self, clause: str, scope: TranslationScope) -> Union[Tuple[Term, str], Untranslatable]:
        for rule in self.rules:
            slots = rule.match(clause)
            if slots is None:
                continue
            built = self._instantiate(rule, slots, scope)
            if built is not None:
                return built
        return Untranslatable(span=self._first_unmatched(clause, scope), reason="no pattern matches")

    def _first_unmatched(self, clause: str, scope: TranslationScope) -> str:
        words = clause.split()
        if "or" in words:
            return "or"
        for word in words:
            if word in self._keywords or scope.resolve_value(word) is not None:
                continue
            return word
        return clause

    def _instantiate(
        self, rule: PatternRule, slots: Dict[str, str], scope: TranslationScope
    ) -> Optional[Tuple[Term, str]]:
        confidence = [LOW if rule.low_confidence else HIGH]
        lhs = self._operand(rule.template.lhs, slots, scope, confidence)
        rhs = self._operand(rule.template.rhs, slots, scope, confidence)
        if lhs is None or rhs is None:
            return None
        kind = _term_kind(rule.template.op, lhs, rhs)
        if kind is None:
            return None
        return Term(lhs, rule.template.op, rhs, kind), (LOW if LOW in confidence else HIGH)

    def _operand(
        self, operand: Operand, slots: Dict[str, str], scope: TranslationScope, confidence: List[str]
    ) -> Optional[CExpr]:
        if operand.kind == "literal":
            value = operand.value
            type_name = ast.NULL if value is None else (ast.BOOL if isinstance(value, bool) else ast.INT)
            return CLiteral(value, type_name)
        if operand.kind == "slot":
            word = slots.get(operand.name)
            if word is None:
                return None
            if operand.name == "N":
                value = scope.resolve_value(word)
                return value if value is not None and value.type_name == ast.INT else None
            return scope.resolve_identifier(word)
        return self._call_operand(operand, slots, scope, confidence)

    def _call_operand(
        self, operand: Operand, slots: Dict[str, str], scope: TranslationScope, confidence: List[str]
    ) -> Optional[CExpr]:
        receiver_word = slots.get(operand.receiver)
        receiver = scope.resolve_identifier(receiver_word) if receiver_word else None
        if receiver is None:
            return None
        args: List[CExpr] = []
        for arg in operand.args:
            value = self._operand(arg, slots, scope, confidence)
            if value is None:
                return None
            args.append(value)
        candidates = self._methods_of(scope.program, receiver.type_name)
        if "{VERB}" in operand.name:
            verb = slots.get("VERB", "")
            matches = []
            for name, params, returns in candidates:
                quality = _match_verb(verb, name)
                if quality is not None:
                    matches.append((quality != HIGH, name, params, returns, quality))
            matches.sort(key=lambda m: (m[0], m[1]))
        else:
            wanted = operand.name.replace("{ADJ}", slots.get("ADJ", "").capitalize()).lower()
            matches = [(False, n, p, r, HIGH) for n, p, r in candidates if n.lower() == wanted]
        for _, name, params, returns, quality in matches:
            if len(params) != len(args):
                continue
            if not all(ast.assignable(a.type_name, p) for a, p in zip(args, params)):
                continue
            if returns == ast.VOID:
                continue
            confidence.append(quality)
            return CallPred(receiver, name, tuple(args), returns)
        return None

    @staticmethod
    def _methods_of(program: ast.SubjectProgram, type_name: str) -> List[Tuple[str, Tuple[str, ...], str]]:
        if type_name == ast.LIST:
            return [(name, sig[0], sig[1]) for name, sig in sorted(ast.LIST_METHODS.items())]
        unit = program.unit(type_name)
        if unit is None:
            return []
        return [(m.name, m.param_types, m.return_type) for m in unit.methods]


def translate_condition(
    text: str,
    scope: TranslationScope,
    subject: Optional[str] = None,
    rules: Optional[Sequence[PatternRule]] = None,
) -> TranslationOutcome:
    """
    Translate restricted English into terms with the default or given table.

    Args:
        text: Condition text
        scope: Method signature, receiver fields and program methods
        subject: Implicit subject for subject-less clauses (a @param name)
        rules: Optional pattern rules (defaults to the shipped table)

    Returns:
        Translation or Untranslatable
    """
    return ConditionTranslator(rules).translate(text, scope, subject)
