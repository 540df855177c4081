"""
Rendering experiment reports as text, JSON and CSV.
"""
import csv
import io
import json
import os
from typing import Any, Dict, Optional

from jinja2 import Environment, PackageLoader

from ..utils.logger import Logger
from .experiment import RunReport

TEXT = "text"
JSON = "json"
CSV = "csv"

ROW_LABELS = (
    ("Contract mode only: pass", "contract_only_pass"),
    ("Contract mode only: alarm", "contract_only_alarm"),
    ("Both: pass both", "both_pass"),
    ("Both: alarm both", "both_alarm"),
    ("Both: alarm contract mode", "both_alarm_contract"),
    ("Both: alarm baseline", "both_alarm_baseline"),
    ("Baseline only: pass", "baseline_only_pass"),
    ("Baseline only: alarm", "baseline_only_alarm"),
    ("Tested, oracle never judged", "inconclusive"),
    ("Not tested", "untested"),
)

CSV_FIELDS = (
    "program",
    "contract",
    "category",
    "contract_hits",
    "contract_alarms",
    "baseline_hits",
    "baseline_alarms",
    "contract_inconclusive",
    "baseline_inconclusive",
    "contract_tested",
    "baseline_tested",
    "contract_alarm",
    "baseline_alarm",
    "confidence",
    "suspect",
    "source",
)

_env = Environment(loader=PackageLoader("contragen.harness", "templates"), keep_trailing_newline=True)


def _data(report: Any) -> Dict[str, Any]:
    return report.to_dict() if isinstance(report, RunReport) else report


def render_text(report: Any) -> str:
    """Human-readable table plus contracts-per-test counters."""
    return _env.get_template("report.txt.j2").render(data=_data(report), rows=ROW_LABELS)


def render_json(report: Any) -> str:
    return json.dumps(_data(report), indent=2, sort_keys=True) + "\n"


def render_csv(report: Any) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for program in _data(report)["programs"]:
        for row in program["rows"]:
            writer.writerow(row)
    return buffer.getvalue()


def render_report(report: Any, fmt: str = TEXT) -> str:
    """
    Render a RunReport (or its dict form).

    Args:
        report: RunReport or the dict from `RunReport.to_dict`
        fmt: "text", "json" or "csv"

    Returns:
        The rendered report

    Raises:
        ValueError: If the format is unknown
    """
    renderers = {TEXT: render_text, JSON: render_json, CSV: render_csv}
    if fmt not in renderers:
        raise ValueError(f"Unknown report format: {fmt}")
    return renderers[fmt](report)


def write_report(report: RunReport, directory: str, logger: Optional[Logger] = None) -> Dict[str, str]:
    """
    Write `<name>.txt`, `<name>.json` and `<name>.csv` into a directory.

    Returns:
        Paths by format
    """
    os.makedirs(directory, exist_ok=True)
    paths = {}
    for fmt, extension in ((TEXT, "txt"), (JSON, "json"), (CSV, "csv")):
        path = os.path.join(directory, f"{report.name}.{extension}")
        with open(path, "w", encoding="utf-8") as f:
            f.write(render_report(report, fmt))
        paths[fmt] = path
    if logger:
        logger.system_message(f"Report written to {paths[JSON]}")
    return paths
