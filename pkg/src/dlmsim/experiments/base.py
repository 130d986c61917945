"""Configuration plumbing shared by all experiments."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from typing import Any, Mapping


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Base class for experiment configurations.

    Angles are given in degrees, matching the JSON files read by the command
    line interface.  Subclasses validate their own fields in ``validate``.
    """

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"unknown configuration keys for {cls.__name__}: {', '.join(unknown)}")
        kwargs = {}
        for f in dataclasses.fields(cls):
            if f.name in data:
                value = data[f.name]
                if isinstance(value, list):
                    value = tuple(value)
                kwargs[f.name] = value
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in dataclasses.asdict(self).items()}

    def digest(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def __post_init__(self):
        try:
            self.validate()
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def validate(self) -> None:  # pragma: no cover - overridden
        pass


def require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def require_count(value, name: str) -> None:
    require(isinstance(value, int) and not isinstance(value, bool) and value >= 1, f"{name} must be an integer >= 1")


def require_gamma(value, name: str = "gamma") -> None:
    require(isinstance(value, (int, float)) and 0.0 <= value < 1.0, f"{name} must lie in [0, 1)")


def require_finite(value, name: str) -> None:
    require(isinstance(value, (int, float)) and math.isfinite(value), f"{name} must be a finite number")


def phase_grid(step_deg: float, n_points: int, start_deg: float = 0.0) -> list[float]:
    return [start_deg + k * step_deg for k in range(n_points)]
