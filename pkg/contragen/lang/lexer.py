"""
Tokenizer for `.sub` subject sources.
"""
import re
from dataclasses import dataclass
from typing import List

from .errors import Position, SubjectSyntaxError

KEYWORDS = frozenset({
    "class", "exception", "extends", "if", "else", "while", "return",
    "throw", "throws", "new", "this", "true", "false", "null",
})

_TOKEN_SPEC = [
    ("DOC", r"/\*\*(?!/).*?\*/"),
    ("BLOCK_COMMENT", r"/\*.*?\*/"),
    ("LINE_COMMENT", r"//[^\n]*"),
    ("NEWLINE", r"\n"),
    ("SPACE", r"[ \t\r]+"),
    ("INT", r"\d+"),
    ("STRING", r'"(?:[^"\\\n]|\\.)*"'),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"==|!=|<=|>=|&&|\|\||[-+*/%<>=!(){};,.]"),
    ("MISMATCH", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC), re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: Position


def tokenize(source: str) -> List[Token]:
    """
    Split subject source text into tokens.

    Doc comments survive as DOC tokens; ordinary comments and whitespace
    are dropped.

    Args:
        source: UTF-8 decoded source text

    Returns:
        Token list terminated by an EOF token

    Raises:
        SubjectSyntaxError: On characters outside the grammar
    """
    tokens: List[Token] = []
    line = 1
    line_start = 0
    for match in _TOKEN_RE.finditer(source):
        kind = match.lastgroup or "MISMATCH"
        text = match.group()
        pos = Position(line, match.start() - line_start + 1)
        if kind == "MISMATCH":
            raise SubjectSyntaxError(f"Unexpected character {text!r}", pos)
        if kind in ("DOC", "BLOCK_COMMENT", "STRING") or kind == "NEWLINE":
            newlines = text.count("\n")
            if newlines:
                line += newlines
                line_start = match.start() + text.rfind("\n") + 1
        if kind in ("NEWLINE", "SPACE", "LINE_COMMENT", "BLOCK_COMMENT"):
            continue
        if kind == "IDENT" and text in KEYWORDS:
            kind = "KEYWORD"
        tokens.append(Token(kind, text, pos))
    tokens.append(Token("EOF", "", Position(line, len(source) - line_start + 1)))
    return tokens
