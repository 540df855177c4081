"""
Coverage-driven test generation: branch directions and method calls as goals.
"""
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..fitness.distance import normalize
from ..lang import ast
from ..lang.trace import ExecutionTrace
from ..search.archive import Archive
from ..search.config import SearchConfig
from ..search.engine import GeneticSearch
from ..search.planner import batch_budget
from ..search.progress import ProgressLog
from ..search.testcase import TestCase
from ..utils.logger import Logger

BRANCH = "branch"
METHOD = "method"


@dataclass(frozen=True)
class CoverageObjective:
    """
    A coverage goal: one direction of a branch point, or a method being
    entered.
    """

    kind: str
    location: str
    direction: Optional[bool] = None

    def __post_init__(self):
        if self.kind not in (BRANCH, METHOD):
            raise ValueError(f"Unknown coverage kind: {self.kind}")
        if self.kind == BRANCH and self.direction is None:
            raise ValueError("Branch goals need a direction")

    @property
    def id(self) -> str:
        if self.kind == BRANCH:
            return f"branch:{self.location}:{'true' if self.direction else 'false'}"
        return f"method:{self.location}"

    def score(self, trace: ExecutionTrace) -> float:
        """
        0 when covered; for a reached but uncovered branch the normalized
        distance to flipping it; 1 otherwise.
        """
        if not trace.halted_normally:
            return 1.0
        if self.kind == METHOD:
            if self.location in trace.entered:
                return 0.0
            return 0.0 if any(c.method_id == self.location for c in trace.calls) else 1.0
        best: Optional[float] = None
        for record in trace.branches:
            if record.branch_id != self.location:
                continue
            if record.taken == self.direction:
                return 0.0
            if best is None or record.distance < best:
                best = record.distance
        if best is None:
            return 1.0
        return normalize(best) if best > 0 else 1.0


def coverage_goals(program: ast.SubjectProgram) -> List[CoverageObjective]:
    """
    Both directions of every branch point, then every method and
    constructor (implicit constructors included).
    """
    goals: List[CoverageObjective] = []
    for branch_id in program.all_branch_ids():
        goals.append(CoverageObjective(BRANCH, branch_id, True))
        goals.append(CoverageObjective(BRANCH, branch_id, False))
    for unit in program.units:
        goals.append(CoverageObjective(METHOD, f"{unit.name}.{unit.name}"))
        for method in unit.methods:
            goals.append(CoverageObjective(METHOD, method.method_id))
    return goals


@dataclass
class CoverageSuite:
    """The union of a coverage run's archived tests."""

    tests: List[TestCase]
    archive: Archive
    goals: List[CoverageObjective] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.tests)

    @property
    def covered(self) -> List[str]:
        return self.archive.solved_ids

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tests": [t.to_dict() for t in self.tests],
            "covered": self.covered,
            "goals": [g.id for g in self.goals],
        }


def evolve_coverage(
    program: ast.SubjectProgram,
    config: SearchConfig,
    rng: random.Random,
    budget: Optional[float] = None,
    logger: Optional[Logger] = None,
    progress: Optional[ProgressLog] = None,
) -> CoverageSuite:
    """
    Run the genetic search against coverage goals.

    Args:
        program: Subject program
        config: Search configuration
        rng: Seeded random source
        budget: Budget in the configured unit; the harness passes the sum of
            the contract-mode batch budgets
        logger: Optional logger
        progress: Optional progress log

    Returns:
        CoverageSuite with the distinct archived tests
    """
    goals = coverage_goals(program)
    if budget is None:
        budget = batch_budget(config.batch_size, config)
    if not goals:
        return CoverageSuite([], Archive(), [])
    search = GeneticSearch(
        program,
        goals,
        config,
        rng,
        snapshot_methods=frozenset(),
        logger=logger,
        progress=progress,
        source="Baseline",
    )
    archive = search.run(budget, config.budget_mode)
    return CoverageSuite(archive.tests(solved_only=True), archive, goals)
