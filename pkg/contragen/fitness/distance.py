"""
Term distances and their normalization.
"""
from typing import NamedTuple, Sequence

from ..contracts.evaluation import CallBinding, Unevaluable, compare
from ..contracts.model import EXCEPTION_TYPE, NUMERIC, Term

DEFAULT_EPSILON = 0.5


class TermDistance(NamedTuple):
    distance: float
    unevaluable: bool = False


def normalize(val: float) -> float:
    """
    Map a nonnegative distance into [0, 1).

    Args:
        val: Raw distance, val >= 0

    Returns:
        val / (1 + val)

    Raises:
        ValueError: If val is negative
    """
    if val < 0:
        raise ValueError(f"Cannot normalize a negative distance: {val}")
    return val / (1.0 + val)


def term_distance(term: Term, binding: CallBinding, epsilon: float = DEFAULT_EPSILON) -> TermDistance:
    """
    Distance of one call from satisfying a term.

    Numeric terms grade how far the operands are apart; boolean, reference
    and exception-type terms are 0 when satisfied and 1 otherwise. A term
    whose operands cannot be evaluated gets distance 1 and is flagged.

    Args:
        term: The term
        binding: Values of the call the term is checked against
        epsilon: Offset added to numeric gaps so strict comparisons that fail
            on equality still get a nonzero distance

    Returns:
        TermDistance in [0, 1]
    """
    cache = binding.record.cache
    key = ("distance", term, epsilon)
    cached = cache.get(key)
    if cached is not None:
        return cached
    result = _compute(term, binding, epsilon)
    cache[key] = result
    return result


def _compute(term: Term, binding: CallBinding, epsilon: float) -> TermDistance:
    if term.kind == EXCEPTION_TYPE:
        return TermDistance(0.0 if binding.holds(term) else 1.0)
    if term.mentions_retval and binding.record.threw:
        return TermDistance(1.0, True)
    try:
        left = binding.value(term.lhs)
        right = binding.value(term.rhs)
        holds = compare(term.op, left, right)
    except Unevaluable:
        return TermDistance(1.0, True)
    if holds:
        return TermDistance(0.0)
    if term.kind == NUMERIC and isinstance(left, int) and isinstance(right, int):
        return TermDistance(normalize(abs(left - right) + epsilon))
    return TermDistance(1.0)


def aggregate(distances: Sequence[float]) -> float:
    """
    Combine the distances of a conjunction.

    A lone term's distance is already in [0, 1] and is kept as is; two or
    more are summed and normalized.
    """
    if not distances:
        return 0.0
    if len(distances) == 1:
        return distances[0]
    return normalize(sum(distances))


def product(distances: Sequence[float]) -> float:
    result = 1.0
    for d in distances:
        result *= d
    return result
