from .coverage import CoverageObjective, CoverageSuite, coverage_goals, evolve_coverage
from .oracles import ALARM, INCONCLUSIVE, PASS, InstrumentedSuite, InstrumentedTest, instrument_oracles

__all__ = [
    "ALARM",
    "INCONCLUSIVE",
    "PASS",
    "CoverageObjective",
    "CoverageSuite",
    "InstrumentedSuite",
    "InstrumentedTest",
    "coverage_goals",
    "evolve_coverage",
    "instrument_oracles",
]
