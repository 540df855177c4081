"""
Writing emitted suites to disk and replaying them.
"""
import json
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from jinja2 import Environment, PackageLoader, StrictUndefined

from ..contracts.evaluation import CallBinding, term_holds
from ..contracts.model import Contract
from ..lang import ast
from ..lang.interpreter import DEFAULT_STEP_BUDGET, execute_test
from ..search.selection import Solution
from ..search.testcase import TestCase
from ..utils.logger import Logger
from .naming import assign_names
from .oracle import ALARM, PASS, EmittedTest, attach_oracle

MANIFEST = "manifest.json"
ERROR = "error"


def build_suite(
    solutions: Sequence[Solution],
    contracts: Sequence[Contract],
    assume_oracles: bool = False,
) -> List[EmittedTest]:
    """
    Name and attach oracles to every selected solution.

    Args:
        solutions: Output of select_solutions
        contracts: All contracts of the program
        assume_oracles: Render assume lines for preconditions and guards

    Returns:
        Emitted tests in solution order
    """
    by_id = {c.id: c for c in contracts}
    requests = []
    for solution in solutions:
        contract = by_id[solution.contract_id]
        requests.append((contract.method_name, contract.guard_text, contract.assert_text, contract.id))
    names = assign_names(requests)
    suite = []
    for solution, name in zip(solutions, names):
        contract = by_id[solution.contract_id]
        pres = [c for c in contracts if c.is_precondition and c.target_method == contract.target_method]
        suite.append(attach_oracle(solution.test, contract, solution.outcome, name, pres, assume_oracles))
    return suite


@dataclass
class ReplayResult:
    """Outcome of re-running an emitted test: pass, alarm or error."""

    name: str
    outcome: str
    failing_statement: Optional[int] = None
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "outcome": self.outcome,
            "failing_statement": self.failing_statement,
            "detail": self.detail,
        }


def replay(
    name: str,
    test: TestCase,
    contract: Contract,
    program: ast.SubjectProgram,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> ReplayResult:
    """
    Re-execute an emitted test and check its contract oracle.

    The oracle looks only at the focal call: an exception assertion passes
    when the call throws the named exception (or a subtype); a value
    assertion passes when the call returns and every assertion term holds.

    Args:
        name: Test name
        test: The test with its focal index
        contract: Focal contract
        program: Subject program
        step_budget: Interpreter step budget

    Returns:
        ReplayResult
    """
    if test.focal_index is None:
        return ReplayResult(name, ERROR, None, "no focal call")
    trace = execute_test(program, test, step_budget, frozenset([contract.target_method]))
    if not trace.halted_normally:
        return ReplayResult(name, ERROR, None, f"halted: {trace.halt_reason}")
    record = next((c for c in trace.calls if c.statement_index == test.focal_index), None)
    if record is None:
        return ReplayResult(name, ERROR, test.focal_index, "focal call skipped")
    if record.threw and not contract.asserts_exception:
        return ReplayResult(name, ERROR, test.focal_index, f"unexpected {record.thrown}")
    binding = CallBinding(program, record)
    for term in contract.assert_terms:
        if term_holds(binding, term) is not True:
            return ReplayResult(name, ALARM, test.focal_index, term.to_sexpr())
    return ReplayResult(name, PASS)


class SuiteExporter:
    """
    Writes emitted tests as `<unit>/<name>.subtest` plus `<unit>/manifest.json`.
    """

    def __init__(self, output_dir: str, logger: Optional[Logger] = None):
        """
        Initialize the exporter.

        Args:
            output_dir: Root directory of the emitted suites
            logger: Logger instance for IRC-style logging
        """
        self.output_dir = output_dir
        self.logger = logger
        self.env = Environment(
            loader=PackageLoader("contragen.emit", "templates"),
            keep_trailing_newline=True,
            undefined=StrictUndefined,
        )

    def render(self, test: EmittedTest) -> str:
        return self.env.get_template("test.subtest.j2").render(test=test)

    def export(self, unit: str, tests: Sequence[EmittedTest]) -> str:
        """
        Write one unit's suite.

        Args:
            unit: Unit name (directory name)
            tests: Emitted tests of the unit

        Returns:
            Path of the unit directory
        """
        directory = os.path.join(self.output_dir, unit)
        os.makedirs(directory, exist_ok=True)
        if self.logger:
            self.logger.source_message("Emitter", f"Writing {len(tests)} tests to {directory}")
        for test in tests:
            with open(os.path.join(directory, f"{test.name}.subtest"), "w", encoding="utf-8") as f:
                f.write(self.render(test))
        manifest = {"unit": unit, "tests": [t.to_dict() for t in tests]}
        with open(os.path.join(directory, MANIFEST), "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")
        return directory

    def export_by_unit(self, tests: Sequence[EmittedTest]) -> List[str]:
        """Group tests by the unit of their focal contract and export each group."""
        groups: Dict[str, List[EmittedTest]] = {}
        for test in tests:
            unit = test.focal_contract.split(".", 1)[0]
            groups.setdefault(unit, []).append(test)
        return [self.export(unit, groups[unit]) for unit in sorted(groups)]


def load_manifest(directory: str) -> Dict[str, Any]:
    """
    Read a unit manifest back.

    Raises:
        FileNotFoundError: If the directory has no manifest
    """
    with open(os.path.join(directory, MANIFEST), "r", encoding="utf-8") as f:
        return json.load(f)


def replay_manifest(directory: str, program: ast.SubjectProgram, contracts: Sequence[Contract]) -> List[ReplayResult]:
    """Replay every test listed in a unit manifest."""
    by_id = {c.id: c for c in contracts}
    results = []
    for entry in load_manifest(directory)["tests"]:
        contract = by_id.get(entry["focal_contract"])
        test = TestCase.from_dict(entry["test"])
        if contract is None:
            results.append(ReplayResult(entry["name"], ERROR, None, "unknown contract"))
            continue
        results.append(replay(entry["name"], test, contract, program))
    return results
