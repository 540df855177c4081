"""
Objective functions for contract-guided search.
"""
from .distance import normalize, term_distance
from .objective import (
    SATISFY,
    VIOLATE,
    FitnessEvaluator,
    FitnessValue,
    Objective,
    distance_satisfy,
    distance_violate,
    objectives_for,
)

__all__ = [
    "normalize",
    "term_distance",
    "SATISFY",
    "VIOLATE",
    "FitnessEvaluator",
    "FitnessValue",
    "Objective",
    "distance_satisfy",
    "distance_violate",
    "objectives_for",
]
