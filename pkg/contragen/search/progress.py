"""
JSON-lines progress log for search runs.
"""
import json
import os
from typing import Dict, Optional, TextIO


class ProgressLog:
    """
    Writes one JSON object per generation.

    Each line carries the generation index, the best value per goal and the
    number of test evaluations so far.
    """

    def __init__(self, path: Optional[str] = None, stream: Optional[TextIO] = None):
        self.path = path
        self._owns_stream = stream is None and path is not None
        if self._owns_stream:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            self.stream: Optional[TextIO] = open(path, "a", encoding="utf-8")
        else:
            self.stream = stream
        self.lines = 0

    def record(self, generation: int, best: Dict[str, float], evaluations: int, batch: Optional[int] = None) -> None:
        if self.stream is None:
            return
        entry = {"generation": generation, "best": best, "evaluations": evaluations}
        if batch is not None:
            entry["batch"] = batch
        self.stream.write(json.dumps(entry, sort_keys=True) + "\n")
        self.stream.flush()
        self.lines += 1

    def close(self) -> None:
        if self._owns_stream and self.stream is not None:
            self.stream.close()
            self.stream = None

    def __enter__(self) -> "ProgressLog":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
