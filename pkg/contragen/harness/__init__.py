from .experiment import (
    CATEGORIES,
    ContractRow,
    Experiment,
    GenerationRun,
    ProgramReport,
    RunReport,
    run_contract_generation,
    run_coverage_generation,
    run_experiment,
)
from .report import render_report, write_report

__all__ = [
    "CATEGORIES",
    "ContractRow",
    "Experiment",
    "GenerationRun",
    "ProgramReport",
    "RunReport",
    "render_report",
    "run_contract_generation",
    "run_coverage_generation",
    "run_experiment",
    "write_report",
]
