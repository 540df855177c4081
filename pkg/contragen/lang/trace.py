"""
Execution traces recorded by the interpreter.
"""
from typing import Any, Dict, List, Optional, Tuple

from .snapshot import Snapshot
from .values import Value, render_value

HALT_NORMAL = "normal"
HALT_STEP_BUDGET = "step-budget"
HALT_FAULT = "fault"

RETURNED = "returned"
THROWN = "thrown"


class CallRecord:
    """
    One test-level call: a construction or a method invocation.

    Exactly one of `returned` / `thrown` describes the outcome; `snapshot`
    is the frozen pre-call state when the caller asked for it.
    """

    def __init__(
        self,
        statement_index: int,
        method_id: str,
        receiver: str,
        args: Tuple[str, ...],
        snapshot: Optional[Snapshot],
    ):
        self.statement_index = statement_index
        self.method_id = method_id
        self.receiver = receiver
        self.args = args
        self.snapshot = snapshot
        self.outcome = RETURNED
        self.returned: Value = None
        self.thrown: Optional[str] = None
        self.thrown_lineage: Tuple[str, ...] = ()
        # Term distances shared by every objective looking at this call.
        self.cache: Dict[Any, Any] = {}

    def set_returned(self, value: Value) -> None:
        self.outcome = RETURNED
        self.returned = value
        self.thrown = None
        self.thrown_lineage = ()

    def set_thrown(self, name: str, lineage: Tuple[str, ...]) -> None:
        self.outcome = THROWN
        self.returned = None
        self.thrown = name
        self.thrown_lineage = lineage

    @property
    def threw(self) -> bool:
        return self.outcome == THROWN

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "statement": self.statement_index,
            "method": self.method_id,
            "receiver": self.receiver,
            "args": list(self.args),
            "outcome": self.outcome,
        }
        if self.threw:
            data["thrown"] = self.thrown
        else:
            data["returned"] = render_value(self.returned)
        return data


class BranchRecord:
    """
    A branch evaluation: the direction taken and how far its predicate was
    from flipping.
    """

    __slots__ = ("branch_id", "taken", "distance")

    def __init__(self, branch_id: str, taken: bool, distance: float):
        self.branch_id = branch_id
        self.taken = taken
        self.distance = distance

    def to_dict(self) -> Dict[str, Any]:
        return {"branch": self.branch_id, "taken": self.taken, "distance": self.distance}


class ExecutionTrace:
    """Everything observed while running one test."""

    def __init__(self):
        self.calls: List[CallRecord] = []
        self.branches: List[BranchRecord] = []
        self.entered: List[str] = []
        self.skipped: List[int] = []
        self.logs: List[str] = []
        self.halt_reason = HALT_NORMAL
        self.fault: Optional[str] = None
        self.steps = 0

    @property
    def halted_normally(self) -> bool:
        return self.halt_reason == HALT_NORMAL

    def calls_to(self, method_id: str) -> List[CallRecord]:
        return [c for c in self.calls if c.method_id == method_id]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "calls": [c.to_dict() for c in self.calls],
            "branches": [b.to_dict() for b in self.branches],
            "entered": list(self.entered),
            "skipped": list(self.skipped),
            "halt_reason": self.halt_reason,
            "fault": self.fault,
            "steps": self.steps,
        }
