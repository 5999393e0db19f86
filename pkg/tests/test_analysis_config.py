import json

import pytest

from cdod.config import AnalysisConfig
from cdod.config.analysis_config import CONFLICT_LIMIT_ENV
from cdod.errors import ConfigError

MOCK_SETTINGS = {
    "analysis": {
        "solver": "minisat22",
        "conflict_limit": 5000,
        "default_objects_per_class": 2,
        "enum_max_objects": 3,
    },
    "unrelated": {"ignored": True},
}


@pytest.fixture
def settings_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(MOCK_SETTINGS))
    return str(path)


def test_missing_file_means_defaults(tmp_path, monkeypatch):
    monkeypatch.delenv(CONFLICT_LIMIT_ENV, raising=False)
    settings = AnalysisConfig(str(tmp_path / "absent.json")).get_settings()
    assert settings.solver == "glucose3"
    assert settings.conflict_limit == 1_000_000
    assert settings.sweep_workers is None


def test_settings_are_read(settings_file, monkeypatch):
    monkeypatch.delenv(CONFLICT_LIMIT_ENV, raising=False)
    config = AnalysisConfig(settings_file)
    settings = config.get_settings()
    assert settings.solver == "minisat22"
    assert settings.default_objects_per_class == 2
    assert settings.enum_max_objects == 3
    assert settings.conflict_limit == 5000


def test_environment_overrides_conflict_limit(settings_file, monkeypatch):
    monkeypatch.setenv(CONFLICT_LIMIT_ENV, "42")
    assert AnalysisConfig(settings_file).get_settings().conflict_limit == 42
    monkeypatch.setenv(CONFLICT_LIMIT_ENV, "lots")
    with pytest.raises(ConfigError, match="must be an integer"):
        AnalysisConfig(settings_file).get_settings()


@pytest.mark.parametrize(
    "analysis, fragment",
    [
        ({"solver": "nope"}, "unknown solver"),
        ({"conflict_limit": 0}, "conflict_limit"),
        ({"default_max_objects": -1}, "default_max_objects"),
    ],
)
def test_invalid_settings(tmp_path, monkeypatch, analysis, fragment):
    monkeypatch.delenv(CONFLICT_LIMIT_ENV, raising=False)
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"analysis": analysis}))
    with pytest.raises(ConfigError) as e:
        AnalysisConfig(str(path)).get_settings()
    assert any(fragment in d.message for d in e.value.diagnostics)


def test_malformed_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{ not json")
    with pytest.raises(ConfigError, match="not valid JSON"):
        AnalysisConfig(str(path))
