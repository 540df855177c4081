"""
Satisfy/violate objective functions over execution traces.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..contracts.evaluation import DEFAULT_GUARD_STEP_BUDGET, CallBinding
from ..contracts.model import Contract, Term
from ..lang import ast
from ..lang.trace import CallRecord, ExecutionTrace
from .distance import DEFAULT_EPSILON, TermDistance, aggregate, product, term_distance

SATISFY = "satisfy"
VIOLATE = "violate"


@dataclass(frozen=True)
class Objective:
    """
    One search goal: satisfy or violate a postcondition, given the target
    method's preconditions.
    """

    contract: Contract
    mode: str
    preconditions: Tuple[Contract, ...] = ()

    def __post_init__(self):
        if self.mode not in (SATISFY, VIOLATE):
            raise ValueError(f"Unknown objective mode: {self.mode}")
        if self.contract.is_precondition:
            raise ValueError(f"Objectives target postconditions, got {self.contract.id}")

    @property
    def id(self) -> str:
        return f"{self.contract.id}:{self.mode}"

    @property
    def method_id(self) -> str:
        return self.contract.target_method

    @property
    def precondition_terms(self) -> Tuple[Term, ...]:
        terms: List[Term] = []
        for pre in self.preconditions:
            terms.extend(pre.guard_terms)
        return tuple(terms)

    @property
    def input_terms(self) -> Tuple[Term, ...]:
        return self.precondition_terms + tuple(self.contract.guard_terms)


def objectives_for(contracts: Sequence[Contract]) -> List[Objective]:
    """
    Build satisfy and violate objectives for every postcondition, contract by
    contract.

    Args:
        contracts: All contracts of a program (preconditions included)

    Returns:
        Objectives ordered satisfy-then-violate per postcondition
    """
    objectives: List[Objective] = []
    for contract in contracts:
        if contract.is_precondition:
            continue
        pres = tuple(c for c in contracts if c.is_precondition and c.target_method == contract.target_method)
        objectives.append(Objective(contract, SATISFY, pres))
        objectives.append(Objective(contract, VIOLATE, pres))
    return objectives


@dataclass(frozen=True)
class FitnessValue:
    """
    Fitness of a test for one objective.

    `call_index` is the statement index of the call that achieved the value,
    or None when the test never called the target method.
    """

    value: float
    d_in: float
    d_ret: float
    call_index: Optional[int] = None

    @property
    def solved(self) -> bool:
        return self.value == 0.0

    @classmethod
    def worst(cls) -> "FitnessValue":
        return cls(1.0, 1.0, 1.0, None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "d_in": self.d_in,
            "d_ret": self.d_ret,
            "solved": self.solved,
            "call": self.call_index,
        }


@dataclass
class FitnessBreakdown:
    """Per-term detail behind a FitnessValue, for reports."""

    objective_id: str
    mode: str
    fitness: FitnessValue
    terms: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        data = {"objective": self.objective_id, "mode": self.mode}
        data.update(self.fitness.to_dict())
        data["terms"] = list(self.terms)
        return data


class FitnessEvaluator:
    """
    Computes objective values from execution traces.
    """

    def __init__(
        self,
        program: ast.SubjectProgram,
        epsilon: float = DEFAULT_EPSILON,
        guard_step_budget: int = DEFAULT_GUARD_STEP_BUDGET,
    ):
        """
        Initialize the evaluator.

        Args:
            program: Program the traces were recorded on
            epsilon: Offset for numeric term distances
            guard_step_budget: Step budget for guard-side method calls
        """
        if epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        self.program = program
        self.epsilon = epsilon
        self.guard_step_budget = guard_step_budget

    def binding(self, record: CallRecord) -> CallBinding:
        return CallBinding(self.program, record, self.guard_step_budget)

    def _distance(self, term: Term, binding: CallBinding) -> TermDistance:
        return term_distance(term, binding, self.epsilon)

    def input_distance(self, objective: Objective, record: CallRecord) -> float:
        """
        How far a call is from meeting the preconditions and the guard.
        """
        terms = objective.input_terms
        if record.snapshot is None or record.snapshot.receiver_is_null:
            return aggregate([1.0] * len(terms)) if terms else 1.0
        binding = self.binding(record)
        return aggregate([self._distance(t, binding).distance for t in terms])

    def call_fitness(self, objective: Objective, record: CallRecord) -> FitnessValue:
        d_in = self.input_distance(objective, record)
        if d_in > 0.0:
            d_ret = 1.0
        else:
            binding = self.binding(record)
            asserts = objective.contract.assert_terms
            if objective.mode == SATISFY:
                d_ret = aggregate([self._distance(t, binding).distance for t in asserts])
            else:
                d_ret = product([self._distance(t.negate(), binding).distance for t in asserts])
        return FitnessValue((d_in + d_ret) / 2.0, d_in, d_ret, record.statement_index)

    def evaluate(self, objective: Objective, trace: ExecutionTrace) -> FitnessValue:
        """
        Fitness of a whole test: the best value over its target-method calls.

        Args:
            objective: Objective to measure
            trace: Trace of the test

        Returns:
            FitnessValue; worst value 1 when the method is never called or
            the run did not halt normally
        """
        if not trace.halted_normally:
            return FitnessValue.worst()
        best = FitnessValue.worst()
        for record in trace.calls:
            if record.method_id != objective.method_id:
                continue
            candidate = self.call_fitness(objective, record)
            if best.call_index is None or candidate.value < best.value:
                best = candidate
                if best.solved:
                    break
        return best

    def breakdown(self, objective: Objective, trace: ExecutionTrace) -> FitnessBreakdown:
        """
        Explain the fitness of a trace term by term.
        """
        fitness = self.evaluate(objective, trace)
        result = FitnessBreakdown(objective.id, objective.mode, fitness)
        if fitness.call_index is None:
            return result
        record = next(c for c in trace.calls if c.statement_index == fitness.call_index)
        null_receiver = record.snapshot is None or record.snapshot.receiver_is_null
        binding = None if null_receiver else self.binding(record)
        parts = [("pre", t) for t in objective.precondition_terms]
        parts += [("guard", t) for t in objective.contract.guard_terms]
        for t in objective.contract.assert_terms:
            parts.append(("assert", t if objective.mode == SATISFY else t.negate()))
        for part, term in parts:
            if binding is None:
                distance = TermDistance(1.0, True)
            else:
                distance = self._distance(term, binding)
            result.terms.append(
                {"part": part, "term": term.to_sexpr(), "distance": distance.distance, "unevaluable": distance.unevaluable}
            )
        return result


def distance_satisfy(
    objective: Objective, trace: ExecutionTrace, program: ast.SubjectProgram, epsilon: float = DEFAULT_EPSILON
) -> FitnessValue:
    if objective.mode != SATISFY:
        raise ValueError(f"{objective.id} is not a satisfy objective")
    return FitnessEvaluator(program, epsilon).evaluate(objective, trace)


def distance_violate(
    objective: Objective, trace: ExecutionTrace, program: ast.SubjectProgram, epsilon: float = DEFAULT_EPSILON
) -> FitnessValue:
    if objective.mode != VIOLATE:
        raise ValueError(f"{objective.id} is not a violate objective")
    return FitnessEvaluator(program, epsilon).evaluate(objective, trace)
