"""
Post-hoc contract oracles for generated suites.

For every call of a contract's target method, a pre-call check decides
whether preconditions and guard hold on the pre-call snapshot (a hit); the
post-call check then evaluates the assertion and records pass or alarm.
"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from ..contracts.model import Contract
from ..fitness.objective import SATISFY, VIOLATE, FitnessEvaluator, Objective
from ..lang import ast
from ..lang.interpreter import execute_test
from ..lang.trace import ExecutionTrace
from ..search.config import SearchConfig
from ..search.testcase import TestCase

PASS = "pass"
ALARM = "alarm"
INCONCLUSIVE = "inconclusive"


@dataclass
class OracleCheck:
    """Outcome of one contract's oracle on one call."""

    contract_id: str
    statement_index: int
    verdict: str

    def to_dict(self) -> Dict[str, Any]:
        return {"contract": self.contract_id, "statement": self.statement_index, "verdict": self.verdict}


@dataclass
class InstrumentedTest:
    """A suite test plus the oracle checks fired while running it."""

    test: TestCase
    checks: List[OracleCheck] = field(default_factory=list)
    trace: Optional[ExecutionTrace] = None

    @property
    def contracts_hit(self) -> List[str]:
        seen: List[str] = []
        for check in self.checks:
            if check.contract_id not in seen:
                seen.append(check.contract_id)
        return seen

    def verdict(self, contract_id: str) -> Optional[str]:
        """
        Per-contract result: None when not hit, alarm if any call alarmed,
        pass if any call passed, inconclusive otherwise.
        """
        verdicts = {c.verdict for c in self.checks if c.contract_id == contract_id}
        if not verdicts:
            return None
        for verdict in (ALARM, PASS):
            if verdict in verdicts:
                return verdict
        return INCONCLUSIVE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "test": self.test.to_dict(),
            "checks": [c.to_dict() for c in self.checks],
            "contracts_hit": self.contracts_hit,
        }


@dataclass
class InstrumentedSuite:
    tests: List[InstrumentedTest]
    contract_ids: List[str]

    def hit(self, contract_id: str) -> bool:
        return any(t.verdict(contract_id) is not None for t in self.tests)

    def alarm(self, contract_id: str) -> bool:
        return any(t.verdict(contract_id) == ALARM for t in self.tests)

    def passed(self, contract_id: str) -> bool:
        return any(t.verdict(contract_id) == PASS for t in self.tests)

    def hit_matrix(self) -> Dict[str, Dict[str, Any]]:
        return {cid: {"hit": self.hit(cid), "alarm": self.alarm(cid)} for cid in self.contract_ids}

    def contracts_per_test(self) -> List[int]:
        return [len(t.contracts_hit) for t in self.tests]

    def per_test_stats(self) -> Dict[str, Any]:
        """
        Contracts-per-test statistics.
        """
        counts = self.contracts_per_test()
        distribution = Counter(counts)
        return {
            "tests": len(counts),
            "zero_contract_tests": distribution.get(0, 0),
            "multi_contract_tests": sum(n for k, n in distribution.items() if k >= 2),
            "max_contracts_per_test": max(counts) if counts else 0,
            "distribution": {str(k): distribution[k] for k in sorted(distribution)},
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tests": [t.to_dict() for t in self.tests],
            "matrix": self.hit_matrix(),
            "per_test_stats": self.per_test_stats(),
        }


def instrument_oracles(
    suite: Sequence[TestCase],
    contracts: Sequence[Contract],
    program: ast.SubjectProgram,
    config: Optional[SearchConfig] = None,
) -> InstrumentedSuite:
    """
    Run every test with contract oracles around target-method calls.

    Args:
        suite: Tests to instrument
        contracts: All contracts of the program (preconditions included)
        program: Subject program
        config: Search configuration (epsilon and budgets)

    Returns:
        InstrumentedSuite with per-test checks and the hit/alarm matrix
    """
    config = config or SearchConfig()
    evaluator = FitnessEvaluator(program, config.epsilon, config.guard_step_budget)
    pairs = []
    for contract in contracts:
        if contract.is_precondition:
            continue
        pres = tuple(c for c in contracts if c.is_precondition and c.target_method == contract.target_method)
        pairs.append((Objective(contract, SATISFY, pres), Objective(contract, VIOLATE, pres)))
    targets = frozenset(s.method_id for s, _ in pairs)

    instrumented = []
    for test in suite:
        trace = execute_test(program, test, config.step_budget, targets)
        result = InstrumentedTest(test, trace=trace)
        if trace.halted_normally:
            for record in trace.calls:
                if record.method_id not in targets:
                    continue
                for satisfy, violate in pairs:
                    if satisfy.method_id != record.method_id:
                        continue
                    if evaluator.input_distance(satisfy, record) > 0.0:
                        continue
                    if evaluator.call_fitness(violate, record).solved:
                        verdict = ALARM
                    elif evaluator.call_fitness(satisfy, record).solved:
                        verdict = PASS
                    else:
                        verdict = INCONCLUSIVE
                    result.checks.append(OracleCheck(satisfy.contract.id, record.statement_index, verdict))
        instrumented.append(result)
    return InstrumentedSuite(instrumented, [s.contract.id for s, _ in pairs])
