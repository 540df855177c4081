"""
Many-objective genetic search over call-sequence tests.
"""
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Protocol, Sequence, Tuple, Union

from ..fitness.objective import FitnessEvaluator, Objective
from ..lang import ast
from ..lang.interpreter import execute_test
from ..lang.trace import HALT_FAULT, ExecutionTrace
from ..utils.logger import Logger
from .archive import Archive
from .config import SECONDS, SearchConfig
from .factory import TestFactory, is_well_formed
from .operators import Mutator, crossover
from .planner import Batch, batch_budget
from .progress import ProgressLog
from .testcase import TestCase


class Goal(Protocol):
    """Anything the search can minimize: an id plus a trace score in [0, 1]."""

    @property
    def id(self) -> str: ...

    def score(self, trace: ExecutionTrace) -> float: ...


class ObjectiveGoal:
    """Adapts a contract Objective to the search's Goal protocol."""

    def __init__(self, objective: Objective, evaluator: FitnessEvaluator):
        self.objective = objective
        self.evaluator = evaluator

    @property
    def id(self) -> str:
        return self.objective.id

    def score(self, trace: ExecutionTrace) -> float:
        return self.evaluator.evaluate(self.objective, trace).value


@dataclass
class Individual:
    test: TestCase
    scores: Dict[str, float]
    serial: str

    def rank(self, goal_id: str) -> Tuple[float, int, str]:
        return (self.scores.get(goal_id, 1.0), len(self.test), self.serial)


class GeneticSearch:
    """
    Many-objective genetic loop: per-goal tournaments, crossover and mutation,
    survivor selection keeping the best individual of every unsolved goal.

    Given the same seed the run is deterministic whatever the worker count:
    offspring are produced sequentially from the injected rng, evaluated in
    parallel, and merged in their production order.
    """

    def __init__(
        self,
        program: ast.SubjectProgram,
        goals: Sequence[Goal],
        config: SearchConfig,
        rng: random.Random,
        target_methods: Sequence[str] = (),
        snapshot_methods: Optional[FrozenSet[str]] = None,
        logger: Optional[Logger] = None,
        progress: Optional[ProgressLog] = None,
        source: str = "Search",
    ):
        """
        Initialize the search.

        Args:
            program: Subject program under test
            goals: Goals to minimize
            config: Search configuration
            rng: Seeded random source; the only source of randomness
            target_methods: Method ids random tests should favour
            snapshot_methods: Method ids whose calls need pre-call snapshots
            logger: Optional logger
            progress: Optional JSON-lines progress log
            source: Logger source name
        """
        if not goals:
            raise ValueError("GeneticSearch needs at least one goal")
        self.program = program
        self.goals = list(goals)
        self.config = config
        self.rng = rng
        self.snapshot_methods = snapshot_methods
        self.logger = logger
        self.progress = progress
        self.source = source
        self.factory = TestFactory(program, config, rng, target_methods)
        self.mutator = Mutator(self.factory, rng, config.max_test_length)
        self.evaluations = 0

    # -- evaluation --------------------------------------------------------

    def _score(self, test: TestCase) -> Optional[Dict[str, float]]:
        trace = execute_test(self.program, test, self.config.step_budget, self.snapshot_methods)
        if trace.halt_reason == HALT_FAULT:
            return None
        return {goal.id: goal.score(trace) for goal in self.goals}

    def evaluate(self, tests: Sequence[TestCase], pool: Optional[ThreadPoolExecutor] = None) -> List[Individual]:
        """
        Evaluate tests against every goal; faulted tests are dropped.
        """
        if pool is None:
            results = [self._score(t) for t in tests]
        else:
            results = list(pool.map(self._score, tests))
        self.evaluations += len(tests)
        population = []
        for test, scores in zip(tests, results):
            if scores is None:
                if self.logger:
                    self.logger.debug(f"Discarded faulted test: {test.serialize()}")
                continue
            population.append(Individual(test, scores, test.serialize()))
        return population

    def _archive(self, archive: Archive, population: Sequence[Individual]) -> None:
        for individual in population:
            for goal in self.goals:
                archive.update(goal.id, individual.scores[goal.id], individual.test)

    # -- selection ---------------------------------------------------------

    def _tournament(self, population: Sequence[Individual], goal_id: str) -> Individual:
        size = min(self.config.tournament_size, len(population))
        contenders = self.rng.sample(range(len(population)), size)
        return min((population[i] for i in contenders), key=lambda ind: ind.rank(goal_id))

    def _survivors(self, pool: Sequence[Individual], unsolved: Sequence[str]) -> List[Individual]:
        size = self.config.population_size
        chosen: List[Individual] = []
        taken = set()
        for goal_id in unsolved:
            if len(chosen) >= size:
                break
            free = [i for i in range(len(pool)) if i not in taken]
            if not free:
                break
            index = min(free, key=lambda i: pool[i].rank(goal_id))
            taken.add(index)
            chosen.append(pool[index])
        goal_ids = list(unsolved) or [g.id for g in self.goals]

        def overall(i: int) -> Tuple[float, int, str]:
            ind = pool[i]
            return (min(ind.scores[g] for g in goal_ids), len(ind.test), ind.serial)

        for index in sorted(range(len(pool)), key=overall):
            if len(chosen) >= size:
                break
            if index not in taken:
                taken.add(index)
                chosen.append(pool[index])
        return chosen

    # -- variation ---------------------------------------------------------

    def _offspring(self, population: Sequence[Individual], unsolved: Sequence[str]) -> List[TestCase]:
        children: List[TestCase] = []
        goal_ids = list(unsolved) or [g.id for g in self.goals]
        turn = 0
        while len(children) < self.config.population_size:
            first = self._tournament(population, goal_ids[turn % len(goal_ids)])
            second = self._tournament(population, goal_ids[(turn + 1) % len(goal_ids)])
            turn += 2
            if self.rng.random() < self.config.crossover_rate:
                cap = self.config.max_test_length * 2
                pair = [
                    crossover(first.test, second.test, self.rng, cap),
                    crossover(second.test, first.test, self.rng, cap),
                ]
            else:
                pair = [first.test.copy(), second.test.copy()]
            for child, parent in zip(pair, (first, second)):
                if self.rng.random() < self.config.mutation_rate or not child.statements:
                    child = self.mutator.mutate(child)
                if not is_well_formed(child, self.program):
                    child = parent.test.copy()
                children.append(child)
        return children[: self.config.population_size]

    # -- main loop ---------------------------------------------------------

    def run(self, budget: float, budget_mode: Optional[str] = None, batch_index: Optional[int] = None) -> Archive:
        """
        Run the search until every goal is solved or the budget is spent.

        Args:
            budget: Generations (or seconds in seconds mode)
            budget_mode: Overrides `config.budget_mode`
            batch_index: Tag for progress log lines

        Returns:
            The archive of best tests per goal
        """
        mode = budget_mode or self.config.budget_mode
        deadline = time.monotonic() + budget if mode == SECONDS else None
        archive = Archive(g.id for g in self.goals)
        executor = ThreadPoolExecutor(self.config.workers) if self.config.workers > 1 else None
        try:
            initial = [self.factory.random_test() for _ in range(self.config.population_size)]
            population = self.evaluate(initial, executor)
            self._archive(archive, population)
            generation = 0
            self._report(archive, generation, batch_index)
            while not archive.all_solved and population:
                if deadline is not None:
                    if time.monotonic() >= deadline:
                        break
                elif generation >= budget:
                    break
                generation += 1
                unsolved = archive.unsolved_ids
                offspring = self.evaluate(self._offspring(population, unsolved), executor)
                self._archive(archive, offspring)
                population = self._survivors(list(population) + offspring, archive.unsolved_ids)
                self._report(archive, generation, batch_index)
        finally:
            if executor is not None:
                executor.shutdown()
        if self.logger:
            self.logger.source_message(
                self.source,
                f"Solved {len(archive.solved_ids)}/{len(archive.goal_ids)} goals "
                f"after {self.evaluations} evaluations",
            )
        return archive

    def _report(self, archive: Archive, generation: int, batch_index: Optional[int]) -> None:
        if self.progress:
            best = {g: archive.best_value(g) for g in archive.goal_ids}
            self.progress.record(generation, best, self.evaluations, batch_index)
        if self.logger and generation % 10 == 0:
            self.logger.debug(
                f"{self.source} generation {generation}: {len(archive.solved_ids)}/{len(archive.goal_ids)} solved"
            )


def evolve(
    program: ast.SubjectProgram,
    batch: Union[Batch, Sequence[Objective]],
    config: SearchConfig,
    rng: random.Random,
    logger: Optional[Logger] = None,
    progress: Optional[ProgressLog] = None,
    batch_index: Optional[int] = None,
) -> Archive:
    """
    Search for tests solving a batch of contract objectives.

    Args:
        program: Subject program
        batch: A planned Batch, or a plain list of objectives (budgeted with
            `batch_budget`)
        config: Search configuration
        rng: Seeded random source
        logger: Optional logger
        progress: Optional progress log
        batch_index: Tag for progress log lines

    Returns:
        Archive keyed by objective id

    Raises:
        ValueError: If an objective targets a method the program lacks
    """
    if isinstance(batch, Batch):
        objectives = list(batch.objectives)
        budget, mode = batch.budget, batch.unit
    else:
        objectives = list(batch)
        budget, mode = batch_budget(len(objectives), config), config.budget_mode
    for objective in objectives:
        if program.method(objective.method_id) is None:
            raise ValueError(f"Objective {objective.id} targets unknown method {objective.method_id}")
    evaluator = FitnessEvaluator(program, config.epsilon, config.guard_step_budget)
    targets = sorted({o.method_id for o in objectives})
    search = GeneticSearch(
        program,
        [ObjectiveGoal(o, evaluator) for o in objectives],
        config,
        rng,
        target_methods=targets,
        snapshot_methods=frozenset(targets),
        logger=logger,
        progress=progress,
    )
    return search.run(budget, mode, batch_index)
