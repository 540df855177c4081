from .archive import Archive, ArchiveEntry
from .config import GENERATIONS, SECONDS, ConfigError, SearchConfig
from .engine import GeneticSearch, ObjectiveGoal, evolve
from .planner import Batch, batch_budget, plan_batches, total_budget
from .progress import ProgressLog
from .selection import SATISFYING, VIOLATING, Solution, select_solutions
from .testcase import Arg, Statement, TestCase

__all__ = [
    "Archive",
    "ArchiveEntry",
    "Arg",
    "Batch",
    "ConfigError",
    "GENERATIONS",
    "GeneticSearch",
    "ObjectiveGoal",
    "ProgressLog",
    "SATISFYING",
    "SECONDS",
    "SearchConfig",
    "Solution",
    "Statement",
    "TestCase",
    "VIOLATING",
    "batch_budget",
    "evolve",
    "plan_batches",
    "select_solutions",
    "total_budget",
]
