from .exporter import ReplayResult, SuiteExporter, build_suite, load_manifest, replay, replay_manifest
from .naming import assign_names, synthesize_name
from .oracle import ALARM, PASS, EmittedTest, FocalContractMismatch, attach_oracle

__all__ = [
    "ALARM",
    "PASS",
    "EmittedTest",
    "FocalContractMismatch",
    "ReplayResult",
    "SuiteExporter",
    "assign_names",
    "attach_oracle",
    "build_suite",
    "load_manifest",
    "replay",
    "replay_manifest",
    "synthesize_name",
]
