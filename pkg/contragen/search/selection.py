"""
Picking one test per contract and shrinking it.
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from ..fitness.objective import SATISFY, VIOLATE, FitnessEvaluator, FitnessValue, Objective
from ..lang import ast
from ..lang.interpreter import execute_test
from .archive import Archive
from .config import SearchConfig
from .testcase import TestCase

VIOLATING = "violating"
SATISFYING = "satisfying"


@dataclass
class Solution:
    """A minimized test chosen for one contract."""

    contract_id: str
    test: TestCase
    outcome: str
    fitness: FitnessValue
    objective: Objective

    def to_dict(self) -> Dict[str, Any]:
        return {
            "contract": self.contract_id,
            "outcome": self.outcome,
            "fitness": self.fitness.to_dict(),
            "test": self.test.to_dict(),
        }


class Minimizer:
    """
    Greedy statement removal that keeps a test's objective value at zero.
    """

    def __init__(self, program: ast.SubjectProgram, config: SearchConfig):
        self.program = program
        self.config = config
        self.evaluator = FitnessEvaluator(program, config.epsilon, config.guard_step_budget)

    def fitness(self, objective: Objective, test: TestCase) -> FitnessValue:
        trace = execute_test(self.program, test, self.config.step_budget, frozenset([objective.method_id]))
        return self.evaluator.evaluate(objective, trace)

    def minimize(self, objective: Objective, test: TestCase) -> Optional[TestCase]:
        """
        Shrink a solving test.

        Args:
            objective: Objective the test solves
            test: The solving test

        Returns:
            The minimized test with `focal_index` set, or None if the test
            does not actually solve the objective
        """
        fitness = self.fitness(objective, test)
        if not fitness.solved:
            return None
        current = TestCase(list(test.statements), objective.contract.id, fitness.call_index)
        changed = True
        while changed:
            changed = False
            for index in range(len(current.statements) - 1, -1, -1):
                candidate = current.without(index)
                if candidate is None:
                    continue
                value = self.fitness(objective, candidate)
                if value.solved:
                    candidate.focal_index = value.call_index
                    current = candidate
                    changed = True
                    break
        return current


def select_solutions(
    archive: Archive,
    objectives: Sequence[Objective],
    program: ast.SubjectProgram,
    config: Optional[SearchConfig] = None,
) -> List[Solution]:
    """
    Choose one test per contract, preferring a violating test over a
    satisfying one, and minimize it.

    Args:
        archive: Archive from one or more `evolve` runs
        objectives: The objectives the archive was built for
        program: Subject program
        config: Search configuration (epsilon and budgets)

    Returns:
        Solutions in contract order; contracts with no solved mode are absent
    """
    minimizer = Minimizer(program, config or SearchConfig())
    by_contract: Dict[str, Dict[str, Objective]] = {}
    order: List[str] = []
    for objective in objectives:
        contract_id = objective.contract.id
        if contract_id not in by_contract:
            by_contract[contract_id] = {}
            order.append(contract_id)
        by_contract[contract_id][objective.mode] = objective

    solutions: List[Solution] = []
    for contract_id in order:
        modes = by_contract[contract_id]
        for mode, outcome in ((VIOLATE, VIOLATING), (SATISFY, SATISFYING)):
            objective = modes.get(mode)
            if objective is None:
                continue
            test = archive.solution(objective.id)
            if test is None:
                continue
            minimized = minimizer.minimize(objective, test)
            if minimized is None:
                continue
            solutions.append(
                Solution(contract_id, minimized, outcome, minimizer.fitness(objective, minimized), objective)
            )
            break
    return solutions
