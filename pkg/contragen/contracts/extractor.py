"""
Extraction of contracts from method doc comments.
"""
import re
from typing import List, Optional, Sequence

from ..lang import ast
from ..utils.logger import Logger
from .model import (
    BOOLEAN,
    EXCEPTION_TYPE,
    HIGH,
    INSTANCEOF,
    LOW,
    NUMERIC,
    POSTCONDITION,
    PRECONDITION,
    REFERENCE,
    CLiteral,
    Contract,
    ExceptionName,
    ExtractionResult,
    Negation,
    RetVal,
    SkipRecord,
    Term,
)
from .patterns import PatternRule
from .translator import ConditionTranslator, Translation, TranslationScope

_CONDITION_RE = re.compile(r"^(?:if|when|whenever)\s+(?P<cond>.+?)\.?$", re.IGNORECASE)
_RETURN_RE = re.compile(
    r"^(?P<value>[\w-]+)\s+if\s+(?P<cond>.+?)(?:,\s*(?:and\s+)?(?P<other>[\w-]+)\s+otherwise)?\.?$",
    re.IGNORECASE,
)


def negate_guard(terms: Sequence[Term]) -> List[Term]:
    """
    Syntactic negation of a guard conjunction.

    A single term flips its operator; longer conjunctions are wrapped in a
    Negation and compared with true.
    """
    if len(terms) == 1:
        return [terms[0].negate()]
    return [Term(Negation(tuple(terms)), "=", CLiteral(True, ast.BOOL), BOOLEAN)]


def _retval_kind(return_type: str) -> str:
    if return_type == ast.INT:
        return NUMERIC
    if return_type == ast.BOOL:
        return BOOLEAN
    return REFERENCE


class ContractExtractor:
    """
    Builds preconditions and postconditions from `@param`, `@throws` and
    `@return` tags.
    """

    def __init__(
        self,
        program: ast.SubjectProgram,
        rules: Optional[Sequence[PatternRule]] = None,
        logger: Optional[Logger] = None,
    ):
        """
        Initialize the extractor.

        Args:
            program: Checked subject program
            rules: Pattern rules (defaults to the shipped table)
            logger: Optional logger instance
        """
        self.program = program
        self.translator = ConditionTranslator(rules)
        self.logger = logger

    def extract_program(self) -> ExtractionResult:
        """
        Extract contracts for every documented method of the program.

        Returns:
            Contracts in unit/method/tag order plus skip records
        """
        result = ExtractionResult()
        for method in self.program.all_methods():
            result.extend(self.extract(method))
        if self.logger:
            self.logger.source_message(
                "Extractor",
                f"{self.program.source_name}: {len(result.contracts)} contract(s), "
                f"{len(result.skipped)} skipped tag(s)",
            )
        return result

    def extract(self, method: ast.MethodDecl) -> ExtractionResult:
        """
        Extract contracts from one method's doc comment.

        Args:
            method: The documented method

        Returns:
            ExtractionResult; empty when the method has no doc comment
        """
        result = ExtractionResult()
        if method.doc is None:
            return result
        if method.is_constructor:
            for tag in method.doc.tags:
                result.skipped.append(
                    SkipRecord(method.method_id, tag.name, self._tag_source(tag), "constructor documentation")
                )
            return result

        scope = TranslationScope(self.program, method)
        pre_index = 0
        post_index = 0
        for tag in method.doc.tags:
            source = self._tag_source(tag)
            if tag.name == "param":
                contract = self._from_param(method, tag, scope, pre_index, source, result)
                if contract is not None:
                    result.contracts.append(contract)
                    pre_index += 1
            elif tag.name in ("throws", "exception"):
                contract = self._from_throws(method, tag, scope, post_index, source, result)
                if contract is not None:
                    result.contracts.append(contract)
                    post_index += 1
            elif tag.name == "return":
                contracts = self._from_return(method, tag, scope, post_index, source, result)
                result.contracts.extend(contracts)
                post_index += len(contracts)
            else:
                result.skipped.append(SkipRecord(method.method_id, tag.name, source, "unsupported tag"))

        if self.logger:
            for skip in result.skipped:
                self.logger.warning(f"{skip.method_id} @{skip.tag}: {skip.reason} ({skip.text})")
        return result

    @staticmethod
    def _tag_source(tag: ast.DocTag) -> str:
        parts = [f"@{tag.name}"]
        if tag.arg:
            parts.append(tag.arg)
        if tag.text:
            parts.append(tag.text)
        return " ".join(parts)

    def _skip(self, result: ExtractionResult, method: ast.MethodDecl, tag: ast.DocTag, reason: str, span: str = "") -> None:
        result.skipped.append(SkipRecord(method.method_id, tag.name, self._tag_source(tag), reason, span))

    def _from_param(
        self,
        method: ast.MethodDecl,
        tag: ast.DocTag,
        scope: TranslationScope,
        index: int,
        source: str,
        result: ExtractionResult,
    ) -> Optional[Contract]:
        if tag.arg is None or tag.arg not in [p.name for p in method.params]:
            self._skip(result, method, tag, "unknown parameter", tag.arg or "")
            return None
        terms: List[Term] = []
        texts: List[str] = []
        confidence = HIGH
        for clause in [c.strip() for c in tag.text.split(",") if c.strip()]:
            outcome = self.translator.translate(clause, scope, subject=tag.arg)
            if isinstance(outcome, Translation):
                terms.extend(outcome.terms)
                texts.append(clause)
                if outcome.confidence == LOW:
                    confidence = LOW
        if not terms:
            self._skip(result, method, tag, "no condition in parameter description")
            return None
        return Contract(
            id=f"{method.method_id}/pre{index}",
            target_method=method.method_id,
            kind=PRECONDITION,
            guard_terms=tuple(terms),
            source_tag=source,
            guard_text=", ".join(texts),
            confidence=confidence,
        )

    def _from_throws(
        self,
        method: ast.MethodDecl,
        tag: ast.DocTag,
        scope: TranslationScope,
        index: int,
        source: str,
        result: ExtractionResult,
    ) -> Optional[Contract]:
        exception = tag.arg or ""
        if exception not in self.program.exception_names():
            self._skip(result, method, tag, "unknown exception type", exception)
            return None
        match = _CONDITION_RE.match(tag.text.strip())
        if not match:
            self._skip(result, method, tag, "no condition", tag.text)
            return None
        guard_text = match.group("cond").strip()
        outcome = self.translator.translate(guard_text, scope)
        if not isinstance(outcome, Translation):
            self._skip(result, method, tag, outcome.reason, outcome.span)
            return None
        assertion = Term(RetVal(), INSTANCEOF, ExceptionName(exception), EXCEPTION_TYPE)
        return Contract(
            id=f"{method.method_id}/post{index}",
            target_method=method.method_id,
            kind=POSTCONDITION,
            guard_terms=tuple(outcome.terms),
            assert_terms=(assertion,),
            source_tag=source,
            guard_text=guard_text,
            assert_text=exception,
            confidence=outcome.confidence,
        )

    def _from_return(
        self,
        method: ast.MethodDecl,
        tag: ast.DocTag,
        scope: TranslationScope,
        index: int,
        source: str,
        result: ExtractionResult,
    ) -> List[Contract]:
        if method.return_type == ast.VOID:
            self._skip(result, method, tag, "void method documents a return value")
            return []
        text = tag.text.strip()
        match = _RETURN_RE.match(text)
        if not match:
            self._skip(result, method, tag, "no condition in return description")
            return []
        retval = RetVal(method.return_type)
        kind = _retval_kind(method.return_type)
        value = scope.resolve_value(match.group("value"))
        if value is None or not ast.assignable(value.type_name, method.return_type):
            self._skip(result, method, tag, "return value not understood", match.group("value"))
            return []
        outcome = self.translator.translate(match.group("cond"), scope)
        if not isinstance(outcome, Translation):
            self._skip(result, method, tag, outcome.reason, outcome.span)
            return []

        # The condition text keeps the "otherwise" clause: both contracts of a
        # pair share their naming texts and are told apart by index.
        _, guard_text = re.split(r"\s+if\s+", text, maxsplit=1, flags=re.IGNORECASE)
        guard_text = guard_text.rstrip(".").strip()
        assert_text = match.group("value")
        contracts = [
            Contract(
                id=f"{method.method_id}/post{index}",
                target_method=method.method_id,
                kind=POSTCONDITION,
                guard_terms=tuple(outcome.terms),
                assert_terms=(Term(retval, "=", value, kind),),
                source_tag=source,
                guard_text=guard_text,
                assert_text=assert_text,
                confidence=outcome.confidence,
            )
        ]
        other_text = match.group("other")
        if other_text:
            other = scope.resolve_value(other_text)
            if other is None or not ast.assignable(other.type_name, method.return_type):
                self._skip(result, method, tag, "alternative return value not understood", other_text)
                return contracts
            contracts.append(
                Contract(
                    id=f"{method.method_id}/post{index + 1}",
                    target_method=method.method_id,
                    kind=POSTCONDITION,
                    guard_terms=tuple(negate_guard(outcome.terms)),
                    assert_terms=(Term(retval, "=", other, kind),),
                    source_tag=source,
                    guard_text=guard_text,
                    assert_text=assert_text,
                    confidence=outcome.confidence,
                )
            )
        return contracts


def extract_contracts(
    method: ast.MethodDecl,
    program: ast.SubjectProgram,
    rules: Optional[Sequence[PatternRule]] = None,
) -> ExtractionResult:
    """
    Extract the contracts documented on one method.

    Args:
        method: Method whose doc comment is read
        program: Program the method belongs to
        rules: Optional pattern rules

    Returns:
        ExtractionResult with contracts and skip records
    """
    return ContractExtractor(program, rules).extract(method)


def extract_program(
    program: ast.SubjectProgram,
    rules: Optional[Sequence[PatternRule]] = None,
    logger: Optional[Logger] = None,
) -> ExtractionResult:
    return ContractExtractor(program, rules, logger).extract_program()
