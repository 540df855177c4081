"""
Frozen pre-call state for guard and precondition evaluation.
"""
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .values import Value, copy_graph


class Snapshot:
    """
    Copy of a call's receiver and arguments taken at method entry.

    Receiver and arguments are copied as one graph, so aliasing between them
    stays intact and a guard like `drawer.contains(gift)` sees the same
    object graph the call saw.
    """

    def __init__(self, receiver: Value, args: Sequence[Value]):
        self._memo: Dict[int, Any] = {}
        self._originals: List[Any] = []
        copied = copy_graph((receiver,) + tuple(args), self._memo, self._originals)
        self.receiver: Value = copied[0]
        self.args: Tuple[Value, ...] = copied[1:]

    @property
    def receiver_is_null(self) -> bool:
        return self.receiver is None

    def field(self, name: str) -> Value:
        """
        Read a receiver field as it was before the call.

        Raises:
            KeyError: If the receiver is null or has no such field
        """
        if self.receiver is None:
            raise KeyError(name)
        return self.receiver.fields[name]

    def translate(self, live: Value) -> Value:
        """
        Map a live value (e.g. a return value) to its snapshot counterpart.

        Identity comparisons between `retVal` and pre-call inputs stay
        meaningful this way; values created by the call map to themselves.
        """
        if live is None or isinstance(live, (bool, int)):
            return live
        return self._memo.get(id(live), live)

    def isolated(self, values: Sequence[Value]) -> Tuple[Value, ...]:
        """
        Deep copy snapshot values for a side-effecting guard call.

        Args:
            values: Values drawn from this snapshot

        Returns:
            Copies sharing structure with each other but not with the snapshot
        """
        return copy_graph(values, {}, [])


def snapshot_state(receiver: Value, args: Sequence[Value]) -> Snapshot:
    """
    Freeze receiver and arguments at method entry.

    Args:
        receiver: The receiver object, or None for a null receiver
        args: Argument values in declaration order

    Returns:
        Snapshot isolated from later side effects
    """
    return Snapshot(receiver, args)


def maybe_snapshot(receiver: Value, args: Sequence[Value], wanted: bool) -> Optional[Snapshot]:
    return snapshot_state(receiver, args) if wanted else None
