"""
Splitting of `/** ... */` comments into a description and tagged fields.
"""
import re
from typing import List, Optional, Tuple

from .ast import DocComment, DocTag
from .errors import Position

# Tags whose first word is an argument (a parameter or exception name).
_ARG_TAGS = ("param", "throws", "exception")

_TAG_RE = re.compile(r"^@(\w+)\s*(.*)$")


def _clean_lines(raw: str) -> List[Tuple[int, str]]:
    body = raw[3:-2] if raw.startswith("/**") and raw.endswith("*/") else raw
    lines = []
    for offset, line in enumerate(body.split("\n")):
        stripped = line.strip()
        if stripped.startswith("*"):
            stripped = stripped[1:].strip()
        lines.append((offset, stripped))
    return lines


def parse_doc_comment(raw: str, pos: Position) -> DocComment:
    """
    Parse a raw doc comment.

    Every tag starts a line with `@name`; following lines without a tag
    continue the previous tag's text.

    Args:
        raw: The comment including its delimiters
        pos: Position of the comment opener

    Returns:
        DocComment with the description and its tags in source order
    """
    description: List[str] = []
    tags: List[List] = []
    for offset, line in _clean_lines(raw):
        match = _TAG_RE.match(line)
        if match:
            tags.append([match.group(1), match.group(2), pos.line + offset])
        elif tags:
            if line:
                tags[-1][1] = f"{tags[-1][1]} {line}".strip()
        elif line:
            description.append(line)

    doc_tags = []
    for name, text, line in tags:
        text = re.sub(r"\s+", " ", text).strip()
        arg: Optional[str] = None
        if name in _ARG_TAGS and text:
            parts = text.split(None, 1)
            arg = parts[0]
            text = parts[1] if len(parts) > 1 else ""
        doc_tags.append(DocTag(name=name, arg=arg, text=text, line=line))

    return DocComment(raw=raw, description=" ".join(description), tags=tuple(doc_tags), pos=pos)
