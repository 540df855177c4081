"""
Test names derived from the focal contract's doc text.

A name is `test` + the method name + `_` + the relevant words of the
assertion text + `If` + the relevant words of the guard text, in camel case.
Relevant words are everything a small closed-list tagger does not mark as a
determiner; punctuation is dropped.
"""
import re
from collections import Counter
from typing import List, Optional, Sequence, Tuple

DETERMINERS = frozenset(
    {
        "a",
        "an",
        "the",
        "this",
        "that",
        "these",
        "those",
        "each",
        "every",
        "some",
        "any",
        "no",
        "another",
        "either",
        "neither",
    }
)

_WORD_RE = re.compile(r"[A-Za-z0-9]+")


def tag_word(word: str) -> str:
    """Closed-list tag: `det` for determiners, `word` for everything else."""
    return "det" if word.lower() in DETERMINERS else "word"


def relevant_words(text: str) -> List[str]:
    return [w for w in _WORD_RE.findall(text or "") if tag_word(w) != "det"]


def _camel(word: str) -> str:
    if word.endswith("Exception") and word != "Exception":
        word = word[: -len("Exception")] + "Ex"
    elif word.lower() == "exception":
        word = "Ex"
    return word[:1].upper() + word[1:]


def synthesize_name(
    method_name: str,
    guard_text: str,
    assert_text: str,
    collision_index: Optional[int] = None,
    contract_id: str = "",
) -> str:
    """
    Build a test name from a contract's natural-language fragments.

    Args:
        method_name: Name of the method under test
        guard_text: The guard description
        assert_text: The assertion description
        collision_index: Appended as `_k` when given
        contract_id: Used when the assertion has no relevant words

    Returns:
        An identifier made of [A-Za-z0-9_]
    """
    assertion = "".join(_camel(w) for w in relevant_words(assert_text))
    guard = "".join(_camel(w) for w in relevant_words(guard_text))
    if assertion:
        tail = assertion + (f"If{guard}" if guard else "")
    else:
        tail = re.sub(r"[^A-Za-z0-9]+", "_", contract_id).strip("_") or "Contract"
    name = f"test{_camel(method_name)}_{tail}"
    if collision_index is not None:
        name += f"_{collision_index}"
    return name


def assign_names(requests: Sequence[Tuple[str, str, str, str]]) -> List[str]:
    """
    Name a whole suite.

    Args:
        requests: (method name, guard text, assert text, contract id) per test

    Returns:
        Unique names; tests sharing a base name get `_0`, `_1`, ... in order
    """
    bases = [synthesize_name(m, g, a, None, c) for m, g, a, c in requests]
    shared = Counter(bases)
    seen: Counter = Counter()
    names = []
    for base, (m, g, a, c) in zip(bases, requests):
        if shared[base] > 1:
            names.append(synthesize_name(m, g, a, seen[base], c))
            seen[base] += 1
        else:
            names.append(base)
    return names
