"""
Experiment orchestration: both generators, R repetitions, majority rules.
"""
import glob
import math
import os
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from ..baseline.coverage import evolve_coverage
from ..baseline.oracles import InstrumentedSuite, instrument_oracles
from ..contracts.extractor import extract_program
from ..contracts.model import LOW, ExtractionResult
from ..emit.exporter import SuiteExporter, build_suite
from ..emit.oracle import EmittedTest
from ..fitness.objective import Objective, objectives_for
from ..lang import ast
from ..lang.errors import SubjectError
from ..lang.parser import parse_file
from ..search.archive import Archive
from ..search.config import SearchConfig
from ..search.engine import evolve
from ..search.planner import plan_batches, total_budget
from ..search.progress import ProgressLog
from ..search.selection import VIOLATING, Minimizer, Solution, select_solutions
from ..utils.logger import Logger

CONTRACT_MODE = "contract"
COVERAGE_MODE = "coverage"

# Outcome categories, in report order.
CATEGORIES = (
    "contract_only_pass",
    "contract_only_alarm",
    "both_pass",
    "both_alarm",
    "both_alarm_contract",
    "both_alarm_baseline",
    "baseline_only_pass",
    "baseline_only_alarm",
    "inconclusive",
    "untested",
)


@dataclass
class GenerationRun:
    """
    One generator run on one program.

    `hits`, `judged` and `alarms` are keyed by postcondition id. A hit is a
    call with preconditions and guard satisfied; it is judged when some
    oracle on such a call passed or failed.
    """

    mode: str
    seed: int
    hits: Dict[str, bool]
    alarms: Dict[str, bool]
    judged: Dict[str, bool] = field(default_factory=dict)
    tests: int = 0
    contracts_per_test: List[int] = field(default_factory=list)
    solutions: List[Solution] = field(default_factory=list)
    emitted: List[EmittedTest] = field(default_factory=list)
    archive: Optional[Archive] = None
    suite: Optional[InstrumentedSuite] = None

    def inconclusive(self, contract_id: str) -> bool:
        return self.hits.get(contract_id, False) and not self.judged.get(contract_id, False)


def contract_budget(extraction: ExtractionResult, config: SearchConfig) -> float:
    """Sum of the contract-mode batch budgets; 0 when there is nothing to search."""
    objectives = objectives_for(extraction.contracts)
    if not objectives:
        return 0.0
    return total_budget(plan_batches(objectives, config))


def archived_hits(
    archive: Archive, objectives: Sequence[Objective], program: ast.SubjectProgram, config: SearchConfig
) -> Dict[str, bool]:
    """
    Contracts whose best archived test, in either mode, reaches a call with
    preconditions and guard satisfied.
    """
    minimizer = Minimizer(program, config)
    hits: Dict[str, bool] = {}
    for objective in objectives:
        contract_id = objective.contract.id
        if hits.get(contract_id):
            continue
        entry = archive.best(objective.id)
        hit = entry is not None and minimizer.fitness(objective, entry.test).d_in == 0.0
        hits[contract_id] = hit
    return hits


def run_contract_generation(
    program: ast.SubjectProgram,
    extraction: ExtractionResult,
    config: SearchConfig,
    seed: int,
    assume_oracles: bool = False,
    logger: Optional[Logger] = None,
    progress: Optional[ProgressLog] = None,
) -> GenerationRun:
    """
    Contract-mode generation: batched search, selection, minimization and
    oracle attachment.
    """
    posts = extraction.postconditions()
    hits = {c.id: False for c in posts}
    alarms = {c.id: False for c in posts}
    objectives = objectives_for(extraction.contracts)
    if not objectives:
        return GenerationRun(CONTRACT_MODE, seed, hits, alarms, archive=Archive())
    rng = random.Random(seed)
    archive = Archive(o.id for o in objectives)
    for index, batch in enumerate(plan_batches(objectives, config)):
        if logger:
            logger.source_message(
                "Search", f"Batch {index + 1}: {len(batch.objectives)} objectives, budget {batch.budget:g} {batch.unit}"
            )
        archive.merge(evolve(program, batch, config, rng, logger, progress, index))
    solutions = select_solutions(archive, objectives, program, config)
    hits.update(archived_hits(archive, objectives, program, config))
    judged = {cid: False for cid in hits}
    for solution in solutions:
        hits[solution.contract_id] = True
        judged[solution.contract_id] = True
        alarms[solution.contract_id] = solution.outcome == VIOLATING
    emitted = build_suite(solutions, extraction.contracts, assume_oracles)
    return GenerationRun(
        CONTRACT_MODE,
        seed,
        hits,
        alarms,
        judged=judged,
        tests=len(emitted),
        contracts_per_test=[1] * len(emitted),
        solutions=solutions,
        emitted=emitted,
        archive=archive,
    )


def run_coverage_generation(
    program: ast.SubjectProgram,
    extraction: ExtractionResult,
    config: SearchConfig,
    seed: int,
    budget: Optional[float] = None,
    logger: Optional[Logger] = None,
    progress: Optional[ProgressLog] = None,
) -> GenerationRun:
    """
    Baseline generation: coverage search followed by post-hoc oracles.

    Args:
        budget: Search budget; defaults to the contract-mode parity budget
    """
    if budget is None:
        budget = contract_budget(extraction, config) or None
    coverage = evolve_coverage(program, config, random.Random(seed), budget, logger, progress)
    suite = instrument_oracles(coverage.tests, extraction.contracts, program, config)
    hits = {cid: suite.hit(cid) for cid in suite.contract_ids}
    alarms = {cid: suite.alarm(cid) for cid in suite.contract_ids}
    judged = {cid: suite.alarm(cid) or suite.passed(cid) for cid in suite.contract_ids}
    return GenerationRun(
        COVERAGE_MODE,
        seed,
        hits,
        alarms,
        judged=judged,
        tests=len(suite.tests),
        contracts_per_test=suite.contracts_per_test(),
        archive=coverage.archive,
        suite=suite,
    )


@dataclass
class ContractRow:
    """Aggregated results for one postcondition across all repetitions."""

    program: str
    contract_id: str
    source: str
    confidence: str
    repetitions: int
    contract_hits: int = 0
    contract_alarms: int = 0
    baseline_hits: int = 0
    baseline_alarms: int = 0
    contract_inconclusive: int = 0
    baseline_inconclusive: int = 0

    @property
    def threshold(self) -> int:
        return math.ceil(self.repetitions / 2)

    @property
    def contract_tested(self) -> bool:
        return self.contract_hits >= self.threshold

    @property
    def baseline_tested(self) -> bool:
        return self.baseline_hits >= self.threshold

    @property
    def contract_alarm(self) -> bool:
        return self.contract_tested and self.contract_alarms * 2 > self.contract_hits

    @property
    def baseline_alarm(self) -> bool:
        return self.baseline_tested and self.baseline_alarms * 2 > self.baseline_hits

    @property
    def contract_judged(self) -> bool:
        """Tested, and most hitting runs ended in a pass or an alarm."""
        judged = self.contract_hits - self.contract_inconclusive
        return self.contract_tested and judged * 2 > self.contract_hits

    @property
    def baseline_judged(self) -> bool:
        judged = self.baseline_hits - self.baseline_inconclusive
        return self.baseline_tested and judged * 2 > self.baseline_hits

    @property
    def suspect(self) -> bool:
        return self.confidence == LOW and (self.contract_alarm or self.baseline_alarm)

    @property
    def category(self) -> str:
        if self.contract_judged and self.baseline_judged:
            if self.contract_alarm and self.baseline_alarm:
                return "both_alarm"
            if self.contract_alarm:
                return "both_alarm_contract"
            if self.baseline_alarm:
                return "both_alarm_baseline"
            return "both_pass"
        if self.contract_judged:
            return "contract_only_alarm" if self.contract_alarm else "contract_only_pass"
        if self.baseline_judged:
            return "baseline_only_alarm" if self.baseline_alarm else "baseline_only_pass"
        if self.contract_tested or self.baseline_tested:
            return "inconclusive"
        return "untested"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "program": self.program,
            "contract": self.contract_id,
            "source": self.source,
            "confidence": self.confidence,
            "contract_hits": self.contract_hits,
            "contract_alarms": self.contract_alarms,
            "baseline_hits": self.baseline_hits,
            "baseline_alarms": self.baseline_alarms,
            "contract_inconclusive": self.contract_inconclusive,
            "baseline_inconclusive": self.baseline_inconclusive,
            "contract_tested": self.contract_tested,
            "baseline_tested": self.baseline_tested,
            "contract_alarm": self.contract_alarm,
            "baseline_alarm": self.baseline_alarm,
            "category": self.category,
            "suspect": self.suspect,
        }


@dataclass
class ProgramReport:
    name: str
    path: str
    contracts: int
    preconditions: int
    postconditions: int
    skipped: int
    low_confidence: int
    rows: List[ContractRow] = field(default_factory=list)
    skip_records: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "path": self.path,
            "contracts": self.contracts,
            "preconditions": self.preconditions,
            "postconditions": self.postconditions,
            "skipped": self.skipped,
            "low_confidence": self.low_confidence,
            "rows": [r.to_dict() for r in self.rows],
            "skip_records": list(self.skip_records),
        }


@dataclass
class RunReport:
    """Everything an experiment produced, ready for rendering."""

    corpus: str
    seed: int
    repetitions: int
    config: Dict[str, Any]
    programs: List[ProgramReport] = field(default_factory=list)
    failures: List[Dict[str, str]] = field(default_factory=list)
    contract_tests: int = 0
    baseline_contracts_per_test: List[int] = field(default_factory=list)

    @property
    def rows(self) -> List[ContractRow]:
        return [row for program in self.programs for row in program.rows]

    def category_counts(self) -> Dict[str, int]:
        counts = Counter(row.category for row in self.rows)
        return {category: counts.get(category, 0) for category in CATEGORIES}

    def per_test_stats(self) -> Dict[str, Any]:
        counts = self.baseline_contracts_per_test
        distribution = Counter(counts)
        total = len(counts)
        zero = distribution.get(0, 0)
        return {
            "baseline_tests": total,
            "zero_contract_tests": zero,
            "zero_contract_fraction": (zero / total) if total else 0.0,
            "multi_contract_tests": sum(n for k, n in distribution.items() if k >= 2),
            "max_contracts_per_test": max(counts) if counts else 0,
            "distribution": {str(k): distribution[k] for k in sorted(distribution)},
            "contract_mode_tests": self.contract_tests,
        }

    def tested_counts(self) -> Dict[str, int]:
        rows = self.rows
        return {
            "contracts": len(rows),
            "contract_tested": sum(1 for r in rows if r.contract_tested),
            "baseline_tested": sum(1 for r in rows if r.baseline_tested),
            "suspect": sum(1 for r in rows if r.suspect),
        }

    @property
    def name(self) -> str:
        corpus = os.path.basename(os.path.normpath(self.corpus)) or "corpus"
        return f"{corpus}-seed{self.seed}-r{self.repetitions}"

    def to_dict(self) -> Dict[str, Any]:
        counts = self.category_counts()
        return {
            "name": self.name,
            "corpus": os.path.basename(os.path.normpath(self.corpus)),
            "seed": self.seed,
            "repetitions": self.repetitions,
            "config": dict(self.config),
            "programs": [p.to_dict() for p in self.programs],
            "failures": list(self.failures),
            "categories": counts,
            "total": sum(counts.values()),
            "tested": self.tested_counts(),
            "per_test_stats": self.per_test_stats(),
        }


def corpus_files(corpus_dir: str) -> List[str]:
    """Sorted `.sub` files directly under a corpus directory."""
    if not os.path.isdir(corpus_dir):
        raise FileNotFoundError(f"Corpus directory not found: {corpus_dir}")
    return sorted(glob.glob(os.path.join(corpus_dir, "*.sub")))


class Experiment:
    """
    Runs both generators over a corpus.
    """

    def __init__(
        self,
        config: SearchConfig,
        repetitions: int,
        emit_dir: Optional[str] = None,
        assume_oracles: bool = False,
        logger: Optional[Logger] = None,
    ):
        """
        Initialize an experiment.

        Args:
            config: Search configuration; `config.seed` is the base seed
            repetitions: R, number of runs per generator and program
            emit_dir: Where to write the first repetition's emitted suites
            assume_oracles: Render assume lines in emitted tests
            logger: Logger instance for IRC-style logging
        """
        if repetitions < 1:
            raise ValueError(f"repetitions must be at least 1, got {repetitions}")
        self.config = config
        self.repetitions = repetitions
        self.emit_dir = emit_dir
        self.assume_oracles = assume_oracles
        self.logger = logger

    def run_program(self, path: str, report: RunReport) -> ProgramReport:
        program = parse_file(path)
        extraction = extract_program(program, logger=self.logger)
        name = os.path.splitext(os.path.basename(path))[0]
        posts = extraction.postconditions()
        result = ProgramReport(
            name=name,
            path=os.path.basename(path),
            contracts=len(extraction.contracts),
            preconditions=len(extraction.contracts) - len(posts),
            postconditions=len(posts),
            skipped=len(extraction.skipped),
            low_confidence=sum(1 for c in extraction.contracts if c.confidence == LOW),
            skip_records=[s.to_dict() for s in extraction.skipped],
        )
        rows = {
            c.id: ContractRow(name, c.id, c.source_tag, c.confidence, self.repetitions) for c in posts
        }
        budget = contract_budget(extraction, self.config) or None
        for rep in range(self.repetitions):
            seed = self.config.seed + rep
            if self.logger:
                self.logger.source_message("Harness", f"{name}: repetition {rep + 1}/{self.repetitions} (seed {seed})")
            contract_run = run_contract_generation(
                program, extraction, self.config, seed, self.assume_oracles, self.logger
            )
            baseline_run = run_coverage_generation(program, extraction, self.config, seed, budget, self.logger)
            for cid, row in rows.items():
                row.contract_hits += int(contract_run.hits.get(cid, False))
                row.contract_alarms += int(contract_run.alarms.get(cid, False))
                row.baseline_hits += int(baseline_run.hits.get(cid, False))
                row.baseline_alarms += int(baseline_run.alarms.get(cid, False))
                row.contract_inconclusive += int(contract_run.inconclusive(cid))
                row.baseline_inconclusive += int(baseline_run.inconclusive(cid))
            report.contract_tests += contract_run.tests
            report.baseline_contracts_per_test.extend(baseline_run.contracts_per_test)
            if rep == 0 and self.emit_dir and contract_run.emitted:
                SuiteExporter(os.path.join(self.emit_dir, name), self.logger).export_by_unit(contract_run.emitted)
        result.rows = [rows[c.id] for c in posts]
        return result

    def run(self, corpus_dir: str) -> RunReport:
        """
        Run the experiment over every program of a corpus.

        Per-program failures are recorded in `RunReport.failures` and do not
        stop the other programs.
        """
        report = RunReport(corpus_dir, self.config.seed, self.repetitions, self.config.to_dict())
        for path in corpus_files(corpus_dir):
            try:
                report.programs.append(self.run_program(path, report))
            except SubjectError as exc:
                report.failures.append({"program": os.path.basename(path), "error": str(exc)})
                if self.logger:
                    self.logger.error(f"{os.path.basename(path)}: {exc}")
            except (ValueError, RecursionError) as exc:
                report.failures.append({"program": os.path.basename(path), "error": f"{type(exc).__name__}: {exc}"})
                if self.logger:
                    self.logger.error(f"{os.path.basename(path)} failed: {exc}")
        if self.logger:
            counts = report.tested_counts()
            self.logger.success(
                f"Contract mode tested {counts['contract_tested']}/{counts['contracts']} contracts, "
                f"baseline {counts['baseline_tested']}/{counts['contracts']}"
            )
        return report


def run_experiment(
    corpus_dir: str,
    config: SearchConfig,
    repetitions: int = 10,
    emit_dir: Optional[str] = None,
    assume_oracles: bool = False,
    logger: Optional[Logger] = None,
) -> RunReport:
    """
    Run both generators R times over a corpus and classify every contract.

    Args:
        corpus_dir: Directory of `.sub` programs
        config: Search configuration; seeds are config.seed .. config.seed + R - 1
        repetitions: R
        emit_dir: Optional directory for the first repetition's suites
        assume_oracles: Render assume lines in emitted tests
        logger: Optional logger

    Returns:
        RunReport
    """
    return Experiment(config, repetitions, emit_dir, assume_oracles, logger).run(corpus_dir)
