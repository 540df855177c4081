"""
Run configuration: defaults, contragen.json and environment overrides.
"""
import copy
import json
import os
import sys
from typing import Any, Dict

from dotenv import load_dotenv

BUNDLED_CORPUS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus")

# Default configuration
DEFAULT_CONFIG = {
    # Genetic search over call sequences
    "search": {
        "population_size": 50,
        "batch_size": 10,
        "budget_mode": "generations",
        "unit_generations": 20,
        "floor_generations": 60,
        "unit_seconds": 35,
        "floor_seconds": 60,
        "crossover_rate": 0.75,
        "mutation_rate": 0.8,
        "max_test_length": 8,
        "int_range": 100,
        "null_probability": 0.1,
        "target_bias": 0.6,
        "tournament_size": 3,
        "workers": 1,
        "seed": 0,
        "progress_log": None
    },

    # Subject interpreter limits
    "interpreter": {
        "step_budget": 100000,
        "guard_step_budget": 1000
    },

    # Objective functions
    "fitness": {
        "epsilon": 0.5
    },

    # Emitted test suites
    "emit": {
        "assume_oracles": False,
        "output_dir": "generated"
    },

    # Experiment harness
    "harness": {
        "repetitions": 10,
        "report_dir": "reports",
        "corpus_dir": BUNDLED_CORPUS_DIR
    },

    # Console and log-file output
    "logging": {
        "use_colors": True,
        "log_to_file": False,
        "verbose": False
    }
}


# Environment variable -> (key path, converter)
ENV_OVERRIDES = {
    "CONTRAGEN_SEED": ("search.seed", int),
    "CONTRAGEN_WORKERS": ("search.workers", int),
    "CONTRAGEN_REPORT_DIR": ("harness.report_dir", str),
}


def deep_merge(target: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Merge `overrides` into `target` in place, section by section."""
    for name, value in overrides.items():
        current = target.get(name)
        if isinstance(value, dict) and isinstance(current, dict):
            deep_merge(current, value)
        else:
            target[name] = value
    return target


class Settings:
    """
    Layered run configuration.

    Built-in defaults, then `contragen.json` in the working directory, then
    environment variables (a `.env` file is loaded first). Keys are addressed
    with dotted paths such as `search.population_size`.
    """

    def __init__(self, config_path: str = "contragen.json"):
        self.config_path = config_path
        self.config = self._read_file()

        load_dotenv()
        self._apply_env_vars()

    def _read_file(self) -> Dict[str, Any]:
        config = copy.deepcopy(DEFAULT_CONFIG)
        if not os.path.exists(self.config_path):
            return config
        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                deep_merge(config, json.load(f))
        except (OSError, ValueError) as e:
            print(f"Ignoring unreadable {self.config_path}: {e}", file=sys.stderr)
        return config

    def _apply_env_vars(self):
        for name, (key_path, convert) in ENV_OVERRIDES.items():
            raw = os.environ.get(name)
            if not raw:
                continue
            try:
                self.set(key_path, convert(raw))
            except ValueError:
                print(f"Ignoring invalid value for {name}: {raw!r}", file=sys.stderr)

    def reset(self):
        """Restore the built-in defaults."""
        self.config = copy.deepcopy(DEFAULT_CONFIG)

    def save(self):
        """Write the current configuration to `config_path`."""
        with open(self.config_path, "w", encoding="utf-8") as f:
            json.dump(self.config, f, indent=2, sort_keys=True)
            f.write("\n")

    def get(self, key_path: str, default=None) -> Any:
        """
        Look up a dotted key.

        Args:
            key_path: Dotted path, e.g. "harness.repetitions"
            default: Returned when any part of the path is missing

        Returns:
            The stored value or `default`
        """
        node: Any = self.config
        for part in key_path.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def set(self, key_path: str, value: Any):
        """Store a value under a dotted key, creating sections as needed."""
        *sections, leaf = key_path.split(".")
        node = self.config
        for part in sections:
            if not isinstance(node.get(part), dict):
                node[part] = {}
            node = node[part]
        node[leaf] = value

    def __getitem__(self, section: str) -> Dict[str, Any]:
        return self.config.get(section, {})


settings = Settings()
