"""
Per-goal archive of the best tests found so far.
"""
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple

from .testcase import TestCase


@dataclass
class ArchiveEntry:
    goal_id: str
    value: float
    test: TestCase

    @property
    def solved(self) -> bool:
        return self.value == 0.0

    @property
    def key(self) -> Tuple[float, int, str]:
        return (self.value, len(self.test), self.test.serialize())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "goal": self.goal_id,
            "value": self.value,
            "solved": self.solved,
            "test": self.test.to_dict(),
            "rendered": self.test.render_statements(),
        }


class Archive:
    """
    Keeps, for every goal, the best test seen: lowest value first, then the
    shorter test, then the smaller serialization.

    Only entries with value 0 count as solutions; a goal without one was
    missed.
    """

    def __init__(self, goal_ids: Iterable[str] = ()):
        self.goal_ids: List[str] = list(goal_ids)
        self.entries: Dict[str, ArchiveEntry] = {}

    def update(self, goal_id: str, value: float, test: TestCase) -> bool:
        """
        Offer a test for a goal.

        Returns:
            True if the archive entry was replaced
        """
        if goal_id not in self.goal_ids:
            self.goal_ids.append(goal_id)
        candidate = ArchiveEntry(goal_id, value, test.copy())
        current = self.entries.get(goal_id)
        if current is None or candidate.key < current.key:
            self.entries[goal_id] = candidate
            return True
        return False

    def best(self, goal_id: str) -> Optional[ArchiveEntry]:
        return self.entries.get(goal_id)

    def best_value(self, goal_id: str) -> float:
        entry = self.entries.get(goal_id)
        return 1.0 if entry is None else entry.value

    def solution(self, goal_id: str) -> Optional[TestCase]:
        entry = self.entries.get(goal_id)
        if entry is None or not entry.solved:
            return None
        return entry.test

    def is_solved(self, goal_id: str) -> bool:
        return self.solution(goal_id) is not None

    @property
    def solved_ids(self) -> List[str]:
        return [g for g in self.goal_ids if self.is_solved(g)]

    @property
    def unsolved_ids(self) -> List[str]:
        return [g for g in self.goal_ids if not self.is_solved(g)]

    @property
    def all_solved(self) -> bool:
        return not self.unsolved_ids

    def merge(self, other: "Archive") -> None:
        for goal_id in other.goal_ids:
            entry = other.entries.get(goal_id)
            if entry is None:
                if goal_id not in self.goal_ids:
                    self.goal_ids.append(goal_id)
                continue
            self.update(goal_id, entry.value, entry.test)

    def tests(self, solved_only: bool = False) -> List[TestCase]:
        """
        Distinct archived tests in goal order.
        """
        seen = set()
        result = []
        for goal_id in self.goal_ids:
            entry = self.entries.get(goal_id)
            if entry is None or (solved_only and not entry.solved):
                continue
            text = entry.test.serialize()
            if text in seen:
                continue
            seen.add(text)
            result.append(entry.test)
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {
            "goals": list(self.goal_ids),
            "best": {g: self.best_value(g) for g in self.goal_ids},
            "solutions": {g: self.entries[g].to_dict() for g in self.solved_ids},
        }
