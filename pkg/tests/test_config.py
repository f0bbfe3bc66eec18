"""Loading and validating config.json."""

import json
from pathlib import Path

import pytest

from moebius_dyn import config as config_module
from moebius_dyn.config import Config, HistogramSettings, load_config
from moebius_dyn.errors import ConfigError


def write(tmp_path: Path, data) -> Path:
    path = tmp_path / "config.json"
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


def test_shipped_config_matches_defaults():
    assert load_config() == Config()


def test_missing_default_file_gives_defaults(monkeypatch, tmp_path):
    monkeypatch.setattr(config_module, "DEFAULT_CONFIG_PATH", tmp_path / "absent.json")
    assert load_config() == Config()


def test_explicit_file(tmp_path):
    path = write(tmp_path, {"qmax": 12, "histogram": {"bins": 8, "lo": -2.0, "hi": 2.0}})
    config = load_config(path)
    assert config.qmax == 12
    assert config.histogram == HistogramSettings(bins=8, lo=-2.0, hi=2.0)
    assert config.tolerance == Config().tolerance


def test_missing_explicit_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.json")


@pytest.mark.parametrize("data", [
    "{not json",
    "[1, 2]",
    {"qmax": 1},
    {"qmax": "many"},
    {"tolerance": 0},
    {"histogram": {"bins": 4, "lo": 1.0, "hi": -1.0}},
    {"histogram": {"width": 3}},
    {"histogram": 5},
    {"log_level": "LOUD"},
    {"sweep_workers": 0},
    {"colour": "blue"},
])
def test_bad_config(tmp_path, data):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, data))
