"""Configuration management for moebius-dyn."""

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from .errors import ConfigError

# Default config file location (project root)
DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "config.json"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class HistogramSettings:
    """Binning used by the density command."""

    bins: int = 40
    lo: float = -10.0
    hi: float = 10.0


@dataclass(frozen=True)
class Config:
    """Application configuration."""

    qmax: int = 64
    pole_guard: float = 1e-12
    tolerance: float = 1e-10
    max_iterations: int = 100_000
    orbit_start: float = 0.3
    iterations: int = 10
    density_iterations: int = 100_000
    histogram: HistogramSettings = field(default_factory=HistogramSettings)
    bad_point_depth: int = 8
    sweep_workers: int = 4
    log_level: str = "WARNING"

    def __post_init__(self) -> None:
        if self.qmax < 2:
            raise ConfigError(f"qmax must be at least 2, got {self.qmax}")
        if self.pole_guard <= 0 or self.tolerance <= 0:
            raise ConfigError("pole_guard and tolerance must be positive")
        if self.max_iterations < 1 or self.iterations < 0 or self.density_iterations < 0:
            raise ConfigError("iteration counts must be non-negative (max_iterations positive)")
        if self.histogram.bins < 1 or not self.histogram.lo < self.histogram.hi:
            raise ConfigError("histogram needs bins >= 1 and lo < hi")
        if self.bad_point_depth < 0 or self.sweep_workers < 1:
            raise ConfigError("bad_point_depth must be >= 0 and sweep_workers >= 1")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigError(f"unknown log_level {self.log_level!r}")


def _from_dict(data: dict) -> Config:
    known = {f.name for f in fields(Config)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    values = dict(data)
    if "histogram" in values:
        histogram = values["histogram"]
        if not isinstance(histogram, dict):
            raise ConfigError("histogram must be an object with bins, lo and hi")
        try:
            values["histogram"] = HistogramSettings(**histogram)
        except TypeError as e:
            raise ConfigError(f"bad histogram settings: {e}") from e
    try:
        return Config(**values)
    except TypeError as e:
        raise ConfigError(f"bad config value: {e}") from e


def load_config(config_path: Optional[Path] = None) -> Config:
    """Load configuration from a JSON file.

    Args:
        config_path: Explicit file. None means the project's config.json,
            and built-in defaults when that file does not exist.

    Returns:
        Config instance.

    Raises:
        ConfigError: The explicit file is missing, or a file is malformed.
    """
    path = config_path or DEFAULT_CONFIG_PATH

    if not path.exists():
        if config_path is not None:
            raise ConfigError(f"config file not found: {path}")
        return Config()

    try:
        with open(path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return _from_dict(data)
