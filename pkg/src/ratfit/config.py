from __future__ import annotations

import os
from abc import ABC
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .exceptions import ConfigurationError

__all__ = ["Settings", "PathSettings", "EnvSettings"]

# name -> (type, default, lower bound, bound is exclusive)
_FIELDS: dict[str, tuple[type, float | int, float | int, bool]] = {
    "eta": (float, 1e-12, 0.0, True),
    "tau": (float, 1.0, 0.0, True),
    "sigma": (float, 0.0, 0.0, False),
    "threads": (int, 1, 1, False),
    "seed": (int, 0, 0, False),
    "multistart_cap": (int, 5000, 1, False),
    "max_iterations": (int, 200, 1, False),
    "local_tol": (float, 1e-8, 0.0, True),
    "face_test_points": (int, 40000, 0, False),
    "interior_test_points": (int, 100000, 0, False),
}


class Settings(ABC):
    eta: float = 1e-12
    tau: float = 1.0
    sigma: float = 0.0
    threads: int = 1
    seed: int = 0
    multistart_cap: int = 5000
    max_iterations: int = 200
    local_tol: float = 1e-8
    face_test_points: int = 40000
    interior_test_points: int = 100000

    other_info: dict | None = None

    def validate(self) -> Settings:
        error = []
        for name, (type_, default, lower, exclusive) in _FIELDS.items():
            raw = getattr(self, name, None)
            if raw is None or (isinstance(raw, str) and not raw.strip()):
                setattr(self, name, default)
                continue

            try:
                value = type_(raw.strip() if isinstance(raw, str) else raw)
            except (TypeError, ValueError):
                error.append(name)
                continue

            if value < lower or (exclusive and value == lower):
                error.append(name)
                continue

            setattr(self, name, value)

        if error:
            raise ConfigurationError(f"Please verify and correct these settings: {error}")

        return self

    def _apply_thread_override(self) -> None:
        threads = os.getenv("RATFIT_THREADS")
        if threads:
            self.threads = threads


@dataclass
class PathSettings(Settings):
    filename: str | Path = field(default=Path.cwd().joinpath("ratfit.yml"))

    def __post_init__(self):
        self.filename = Path(self.filename)

        try:
            settings_file: dict = yaml.safe_load(self.filename.read_text(encoding="utf8")) or {}
        except (OSError, yaml.YAMLError) as ex:
            raise ConfigurationError(f"Cannot read settings from {self.filename}: {ex}") from ex

        if not isinstance(settings_file, dict):
            raise ConfigurationError(f"The settings file {self.filename} should contain a mapping")

        for name in _FIELDS:
            if name in settings_file:
                setattr(self, name, settings_file.pop(name))

        self.other_info = settings_file
        self._apply_thread_override()


@dataclass
class EnvSettings(Settings):
    def __post_init__(self):
        for name in _FIELDS:
            value = os.getenv(f"RATFIT_{name.upper()}")
            if value is not None:
                setattr(self, name, value)
