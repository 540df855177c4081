"""
IRC-style console logger for generator runs.
"""
import os
import re
import sys
from datetime import datetime
from typing import Any, Dict, Optional, TextIO


class Logger:
    """
    Logger for search, baseline and harness runs with IRC-style formatting.

    Each component logs under its own source name so interleaved output from
    a long experiment stays easy to follow.
    """

    ANSI = {
        "reset": "\033[0m",
        "bold": "\033[1m",
        "red": "\033[91m",
        "green": "\033[92m",
        "yellow": "\033[93m",
        "blue": "\033[94m",
        "magenta": "\033[95m",
        "cyan": "\033[96m",
        "white": "\033[97m",
        "gray": "\033[90m",
    }

    # kind -> (marker, color)
    MARKERS = {
        "system": ("*", "bold"),
        "success": ("✓", "green"),
        "warning": ("⚠", "yellow"),
        "error": ("✗", "red"),
        "debug": ("#", "blue"),
    }

    SOURCE_COLORS = {
        "Search": "cyan",
        "Baseline": "magenta",
        "Harness": "blue",
        "Extractor": "yellow",
        "Emitter": "green",
    }

    _ANSI_RE = re.compile(r"\x1B(?:[@-Z\\-_]|\[[0-?]*[ -/]*[@-~])")

    def __init__(
        self,
        output: Optional[TextIO] = None,
        use_colors: bool = True,
        log_to_file: bool = False,
        log_file: Optional[str] = None,
        verbose: bool = True
    ):
        """
        Args:
            output: Output stream (defaults to sys.stderr)
            use_colors: Emit ANSI color codes on the output stream
            log_to_file: Mirror every line into a plain-text log file
            log_file: Log file path (default: logs/run-<date>_<time>.log)
            verbose: Show debug lines and dictionaries
        """
        self.output = output or sys.stderr
        self.use_colors = use_colors
        self.log_to_file = log_to_file
        self.verbose = verbose

        self.file = None
        if log_to_file:
            if log_file is None:
                os.makedirs("logs", exist_ok=True)
                log_file = os.path.join("logs", f"run-{datetime.now():%Y-%m-%d_%H-%M-%S}.log")
            self.file = open(log_file, "a", encoding="utf-8")

    @classmethod
    def from_settings(cls, logging_config: Dict[str, Any], output: Optional[TextIO] = None) -> "Logger":
        """Build a logger from the `logging` settings section."""
        return cls(
            output=output,
            use_colors=logging_config.get("use_colors", True),
            log_to_file=logging_config.get("log_to_file", False),
            verbose=logging_config.get("verbose", False),
        )

    def _paint(self, text: str, color: str) -> str:
        if not self.use_colors or color not in self.ANSI:
            return text
        return f"{self.ANSI[color]}{text}{self.ANSI['reset']}"

    def _stamp(self) -> str:
        return self._paint(f"[{datetime.now():%H:%M:%S}] ", "gray")

    def _write(self, line: str):
        print(line, file=self.output)
        self.output.flush()
        if self.file:
            self.file.write(self._ANSI_RE.sub("", line) + "\n")
            self.file.flush()

    def _emit(self, kind: str, message: str):
        marker, color = self.MARKERS[kind]
        self._write(self._stamp() + self._paint(f"{marker} ", color) + message)

    def system_message(self, message: str):
        self._emit("system", message)

    def source_message(self, source: str, message: str):
        """
        Log a line attributed to a component, e.g. `<Search> Batch 1: 10 objectives`.

        Args:
            source: Component name (Search, Baseline, Harness, Extractor, Emitter)
            message: Message text; surrounding whitespace is dropped
        """
        tag = self._paint(f"<{source}>", self.SOURCE_COLORS.get(source, "white"))
        self._write(f"{self._stamp()}{tag} {message.strip()}")

    def success(self, message: str):
        self._emit("success", message)

    def warning(self, message: str):
        self._emit("warning", message)

    def error(self, message: str):
        self._emit("error", message)

    def debug(self, message: str):
        if self.verbose:
            self._emit("debug", message)

    def log_dict(self, data: Dict[str, Any], title: Optional[str] = None):
        """
        Log one debug line per key, under an optional title line.
        """
        if not self.verbose:
            return
        if title:
            self.debug(title)
        for key, value in data.items():
            self._emit("debug", self._paint(f"{key}: ", "bold") + str(value))

    def close(self):
        if self.file:
            self.file.close()
            self.file = None

    def __del__(self):
        self.close()
