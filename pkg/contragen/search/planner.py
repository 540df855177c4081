"""
Batching of objectives and per-batch budgets.
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

from .config import GENERATIONS, SearchConfig


@dataclass(frozen=True)
class Batch:
    objectives: Tuple[Any, ...]
    budget: float
    unit: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "objectives": [getattr(o, "id", str(o)) for o in self.objectives],
            "budget": self.budget,
            "unit": self.unit,
        }


def batch_budget(size: int, config: SearchConfig) -> float:
    """
    Budget for a batch of `size` objectives: the larger of the floor and the
    per-objective unit times the batch size.
    """
    if config.fixed_budget is not None:
        return config.fixed_budget
    if config.budget_mode == GENERATIONS:
        return max(config.floor_generations, config.unit_generations * size)
    return max(config.floor_seconds, config.unit_seconds * size)


def plan_batches(objectives: Sequence[Any], config: SearchConfig) -> List[Batch]:
    """
    Group objectives into batches of at most `config.batch_size`.

    Args:
        objectives: Objectives in scheduling order
        config: Search configuration

    Returns:
        Batches with their budgets in the configured unit

    Raises:
        ValueError: If there are no objectives
    """
    if not objectives:
        raise ValueError("plan_batches needs at least one objective")
    batches = []
    for start in range(0, len(objectives), config.batch_size):
        chunk = tuple(objectives[start:start + config.batch_size])
        batches.append(Batch(chunk, batch_budget(len(chunk), config), config.budget_mode))
    return batches


def total_budget(batches: Sequence[Batch]) -> float:
    return sum(b.budget for b in batches)
