"""Scenario configuration (flat JSON) and run records."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .dynamics import AmplitudePair, GridError, TimeGrid
from .model import InvalidParamsError, SystemParams, compensating_detuning

__all__ = [
    "ConfigError",
    "OUTPUT_KINDS",
    "SWEEPABLE",
    "ScenarioConfig",
    "SweepRange",
    "parse_range",
    "RunRecord",
]

OUTPUT_KINDS = ("energy", "ergotropy", "efficiency", "trace-distance", "blp")
SWEEPABLE = ("nu", "rabi_ratio", "r1", "delta", "omega0", "lambda_width")


class ConfigError(ValueError):
    """Bad configuration; the message names the offending field or file position."""


@dataclass(frozen=True)
class SweepRange:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ConfigError(f"sweep count must be a positive integer, got {self.count}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("sweep bounds must be finite")
        if self.count >= 2 and not self.start < self.stop:
            raise ConfigError(f"sweep needs start < stop, got {self.start}:{self.stop}")

    @property
    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, int(self.count))

    def to_list(self) -> list:
        return [self.start, self.stop, int(self.count)]


def parse_range(text) -> SweepRange:
    """``"start:stop:count"``, a ``[start, stop, count]`` list or a single number."""
    try:
        if isinstance(text, (int, float)) and not isinstance(text, bool):
            return SweepRange(float(text), float(text), 1)
        if isinstance(text, str):
            parts = text.split(":")
            if len(parts) == 1:
                v = float(parts[0])
                return SweepRange(v, v, 1)
            start, stop, count = parts
        else:
            start, stop, count = text
        return SweepRange(float(start), float(stop), int(count))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed range {text!r}: expected start:stop:count") from exc


_FLOAT_FIELDS = {"nu", "omega0", "lambda_width", "rabi_ratio", "r1",
                 "c1_abs", "c1_phase", "c2_abs", "c2_phase"}
_OPTIONAL_FLOAT = {"delta", "r2", "t_end"}
_INT_FIELDS = {"seed", "n_theta", "n_phi"}


@dataclass
class ScenarioConfig:
    """Every knob of a run. ``None`` means "derive the default".

    ``delta=None`` selects the omega0-compensating detuning, ``r2=None``
    completes ``r1`` to unit norm, and an unset grid is chosen from the
    coupling regime.
    """

    nu: float = 0.0
    omega0: float = 5.0
    lambda_width: float = 1.0
    delta: float | None = None
    rabi_ratio: float = 0.4
    r1: float = 1.0 / math.sqrt(2.0)
    r2: float | None = None
    c1_abs: float = 1.0
    c1_phase: float = 0.0
    c2_abs: float = 0.0
    c2_phase: float = 0.0
    t_end: float | None = None
    n_points: int | None = None
    outputs: list = field(default_factory=lambda: ["energy"])
    seed: int = 0
    nu_list: list | None = None
    sweep: dict = field(default_factory=dict)
    n_theta: int = 16
    n_phi: int = 8

    # -- construction -------------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
        kwargs = {}
        for key, value in data.items():
            kwargs[key] = _coerce(key, value)
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str, source: str = "<config>") -> "ScenarioConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
        try:
            return cls.from_dict(data)
        except ConfigError as exc:
            raise ConfigError(f"{source}: {exc}") from exc

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_json(text, str(path))

    def override(self, **changes) -> "ScenarioConfig":
        """Copy with the non-``None`` entries of ``changes`` applied (CLI flags)."""
        data = self.to_dict()
        data.update({k: v for k, v in changes.items() if v is not None})
        return type(self).from_dict(data)

    # -- serialisation ------------------------------------------------------------

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["sweep"] = {k: parse_range(v).to_list() for k, v in sorted(self.sweep.items())}
        return data

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    # -- derived objects ----------------------------------------------------------

    def validate(self) -> None:
        self.params()
        self.init()
        self.grid()
        for kind in self.outputs:
            if kind not in OUTPUT_KINDS:
                raise ConfigError(f"outputs: unknown kind {kind!r}; choose from {OUTPUT_KINDS}")
        for key in self.sweep:
            if key not in SWEEPABLE:
                raise ConfigError(f"sweep: {key!r} cannot be swept; choose from {SWEEPABLE}")
            parse_range(self.sweep[key])
        for name in ("n_theta", "n_phi"):
            if getattr(self, name) < 2:
                raise ConfigError(f"{name}: need at least 2 grid values")

    def params(self, **changes) -> SystemParams:
        """System parameters, optionally with swept values substituted."""
        values = {
            "nu": self.nu, "omega0": self.omega0, "lambda_width": self.lambda_width,
            "delta": self.delta, "rabi_ratio": self.rabi_ratio, "r1": self.r1, "r2": self.r2,
        }
        values.update(changes)
        if "r1" in changes:
            values["r2"] = None
        if values["r2"] is None:
            values["r2"] = math.sqrt(max(0.0, 1.0 - values["r1"] ** 2))
        if values["delta"] is None:
            if not values["nu"] > -0.5:
                raise ConfigError(f"nu: must exceed -0.5, got {values['nu']}")
            values["delta"] = compensating_detuning(values["nu"], values["omega0"])
        try:
            return SystemParams(**values)
        except InvalidParamsError as exc:
            raise ConfigError(str(exc)) from exc

    def init(self) -> AmplitudePair:
        pair = AmplitudePair(
            complex(self.c1_abs * np.exp(1j * self.c1_phase)),
            complex(self.c2_abs * np.exp(1j * self.c2_phase)),
        )
        if abs(pair.population - 1.0) > 1e-10:
            raise ConfigError(
                f"c1_abs/c2_abs: initial state must be normalised, got {pair.population:.12g}"
            )
        return pair

    def grid(self, rabi_ratio: float | None = None) -> TimeGrid:
        R = self.rabi_ratio if rabi_ratio is None else rabi_ratio
        t_end = self.t_end if self.t_end is not None else (5.0 if R >= 10 else 30.0)
        n = self.n_points if self.n_points is not None else (20001 if R >= 10 else 3001)
        try:
            return TimeGrid(float(t_end), int(n))
        except GridError as exc:
            raise ConfigError(f"t_end/n_points: {exc}") from exc

    def sweep_ranges(self) -> dict[str, SweepRange]:
        return {k: parse_range(v) for k, v in sorted(self.sweep.items())}


def _coerce(key, value):
    try:
        if key in _FLOAT_FIELDS:
            return float(_number(value))
        if key in _OPTIONAL_FLOAT:
            return None if value is None else float(_number(value))
        if key in _INT_FIELDS:
            return _integer(value)
        if key == "n_points":
            return None if value is None else _integer(value)
        if key == "outputs":
            if isinstance(value, str):
                value = [v for v in value.split(",") if v]
            if not isinstance(value, list):
                raise TypeError("expected a list")
            return [str(v) for v in value]
        if key == "nu_list":
            if value is None:
                return None
            if isinstance(value, str):
                value = [v for v in value.split(",") if v.strip()]
            return [float(_number(v)) for v in value]
        if key == "sweep":
            if not isinstance(value, dict):
                raise TypeError("expected an object of name -> start:stop:count")
            return {str(k): parse_range(v).to_list() for k, v in value.items()}
    except ConfigError as exc:
        raise ConfigError(f"{key}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: invalid value {value!r} ({exc})") from exc
    raise ConfigError(f"unknown config field: {key}")


def _number(value):
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers")
    return value


def _integer(value) -> int:
    if isinstance(value, bool):
        raise TypeError("booleans are not integers")
    if isinstance(value, float) and not value.is_integer():
        raise ValueError("expected an integer")
    return int(value)


@dataclass
class RunRecord:
    """Manifest of one CLI invocation; every emitted file is listed with its SHA-256."""

    command: str
    config: dict
    engine_version: str
    wall_time: float
    started: str
    outputs: list = field(default_factory=list)
    status: str = "ok"
    notes: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"
