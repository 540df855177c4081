"""
Run configuration for the genetic search.
"""
import dataclasses
from dataclasses import dataclass
from typing import Any, Dict, Optional

GENERATIONS = "generations"
SECONDS = "seconds"


class ConfigError(ValueError):
    """A configuration value is out of range or of the wrong kind."""


@dataclass(frozen=True)
class SearchConfig:
    """
    Immutable configuration of one generator run.

    Built from the `search`, `interpreter` and `fitness` settings sections;
    CLI flags override it through `replace`.
    """

    population_size: int = 50
    batch_size: int = 10
    budget_mode: str = GENERATIONS
    unit_generations: int = 20
    floor_generations: int = 60
    unit_seconds: float = 35
    floor_seconds: float = 60
    fixed_budget: Optional[float] = None
    crossover_rate: float = 0.75
    mutation_rate: float = 0.8
    max_test_length: int = 8
    int_range: int = 100
    null_probability: float = 0.1
    target_bias: float = 0.6
    tournament_size: int = 3
    workers: int = 1
    seed: int = 0
    step_budget: int = 100_000
    guard_step_budget: int = 1000
    epsilon: float = 0.5
    progress_log: Optional[str] = None

    def __post_init__(self):
        try:
            self._validate()
        except TypeError as e:
            raise ConfigError(f"Invalid configuration value: {e}") from e

    def _validate(self):
        if self.population_size < 2:
            raise ConfigError(f"population_size must be at least 2, got {self.population_size}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be at least 1, got {self.batch_size}")
        if self.budget_mode not in (GENERATIONS, SECONDS):
            raise ConfigError(f"Unknown budget mode: {self.budget_mode}")
        if self.max_test_length < 1:
            raise ConfigError("max_test_length must be at least 1")
        if self.tournament_size < 1:
            raise ConfigError("tournament_size must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")

    def replace(self, **changes: Any) -> "SearchConfig":
        """Return a copy with some fields changed; None values are ignored."""
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_settings(cls, settings: Any) -> "SearchConfig":
        """
        Build a configuration from a Settings object.

        Args:
            settings: contragen.config.settings.Settings (or anything with
                the same dot-path `get`)

        Returns:
            SearchConfig with settings values over the defaults
        """
        values: Dict[str, Any] = {}
        for f in dataclasses.fields(cls):
            value = settings.get(f"search.{f.name}")
            if value is not None:
                values[f.name] = value
        for name in ("step_budget", "guard_step_budget"):
            value = settings.get(f"interpreter.{name}")
            if value is not None:
                values[name] = value
        epsilon = settings.get("fitness.epsilon")
        if epsilon is not None:
            values["epsilon"] = epsilon
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)
