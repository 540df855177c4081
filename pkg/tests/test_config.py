import json

from contragen.config.settings import DEFAULT_CONFIG, Settings
from contragen.search import SearchConfig


def test_defaults_without_a_file(tmp_path):
    settings = Settings(str(tmp_path / "contragen.json"))
    assert settings.get("search.population_size") == 50
    assert settings.get("search.missing", "fallback") == "fallback"
    assert settings["fitness"] == {"epsilon": 0.5}


def test_file_values_override_defaults(tmp_path):
    path = tmp_path / "contragen.json"
    path.write_text(json.dumps({"search": {"batch_size": 4}, "fitness": {"epsilon": 1.0}}), encoding="utf-8")
    settings = Settings(str(path))
    assert settings.get("search.batch_size") == 4
    assert settings.get("search.population_size") == 50
    config = SearchConfig.from_settings(settings)
    assert (config.batch_size, config.epsilon) == (4, 1.0)


def test_environment_wins(tmp_path, monkeypatch):
    monkeypatch.setenv("CONTRAGEN_SEED", "42")
    monkeypatch.setenv("CONTRAGEN_WORKERS", "many")
    settings = Settings(str(tmp_path / "contragen.json"))
    assert settings.get("search.seed") == 42
    assert settings.get("search.workers") == 1


def test_set_save_and_reset(tmp_path):
    path = tmp_path / "contragen.json"
    settings = Settings(str(path))
    settings.set("harness.repetitions", 3)
    settings.save()
    assert Settings(str(path)).get("harness.repetitions") == 3
    settings.reset()
    assert settings.config == DEFAULT_CONFIG
