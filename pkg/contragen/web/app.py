"""
Report browser for contragen experiments and emitted suites.
"""
import json
import logging
import os
from typing import Any, Dict, List, Optional

from flask import Flask, abort, jsonify, render_template

from contragen.config.settings import settings
from contragen.emit.exporter import MANIFEST, load_manifest
from contragen.harness.report import ROW_LABELS, render_text

# Initialize Flask app
app = Flask(__name__)
app.config["REPORT_DIR"] = settings.get("harness.report_dir", "reports")
app.config["SUITE_DIR"] = settings.get("emit.output_dir", "generated")

logger = logging.getLogger(__name__)


def _report_path(name: str) -> str:
    if os.path.basename(name) != name:
        abort(404)
    path = os.path.join(app.config["REPORT_DIR"], f"{name}.json")
    if not os.path.exists(path):
        abort(404)
    return path


def list_reports() -> List[Dict[str, Any]]:
    """Summaries of every JSON report in the report directory, by name."""
    directory = app.config["REPORT_DIR"]
    reports = []
    if not os.path.isdir(directory):
        return reports
    for item in sorted(os.listdir(directory)):
        if not item.endswith(".json"):
            continue
        try:
            with open(os.path.join(directory, item), "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, ValueError) as e:
            logger.warning(f"Error loading report {item}: {e}")
            continue
        reports.append(
            {
                "name": item[: -len(".json")],
                "corpus": data.get("corpus"),
                "repetitions": data.get("repetitions"),
                "tested": data.get("tested", {}),
            }
        )
    return reports


def list_suites() -> List[Dict[str, Any]]:
    """Every directory under the suite directory that holds a manifest."""
    root = app.config["SUITE_DIR"]
    suites = []
    if not os.path.isdir(root):
        return suites
    for current, _, files in sorted(os.walk(root)):
        if MANIFEST in files:
            manifest = load_manifest(current)
            suites.append(
                {
                    "path": os.path.relpath(current, root),
                    "unit": manifest.get("unit"),
                    "tests": len(manifest.get("tests", [])),
                }
            )
    return suites


@app.route("/")
def index():
    """Reports and emitted suites"""
    return render_template("index.html", reports=list_reports(), suites=list_suites())


@app.route("/reports/<name>")
def view_report(name):
    """One report as category rows plus the contracts-per-test counters"""
    with open(_report_path(name), "r", encoding="utf-8") as f:
        data = json.load(f)
    return render_template("report.html", report=data, rows=ROW_LABELS, text=render_text(data))


@app.route("/api/reports")
def api_reports():
    return jsonify(list_reports())


@app.route("/api/reports/<name>")
def api_report(name):
    """Raw JSON report"""
    with open(_report_path(name), "r", encoding="utf-8") as f:
        return jsonify(json.load(f))


@app.route("/suites/<path:suite>")
def view_suite(suite):
    """Emitted tests of one unit"""
    root = os.path.abspath(app.config["SUITE_DIR"])
    directory = os.path.abspath(os.path.join(root, suite))
    if not directory.startswith(root + os.sep) or not os.path.exists(os.path.join(directory, MANIFEST)):
        abort(404)
    return render_template("suite.html", suite=suite, manifest=load_manifest(directory))


def create_app(report_dir: Optional[str] = None, suite_dir: Optional[str] = None) -> Flask:
    """
    Create and configure the Flask application.

    Args:
        report_dir: Directory of experiment reports
        suite_dir: Directory of emitted suites
    """
    if report_dir:
        app.config["REPORT_DIR"] = report_dir
    if suite_dir:
        app.config["SUITE_DIR"] = suite_dir
    return app
