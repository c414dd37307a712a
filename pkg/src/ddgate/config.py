"""Experiment configuration: defaults, flat config files and validation.

Values are layered as dataclass defaults, then a config file, then
command-line flags. Frequencies are in MHz here and become rad/s only when a
``SimulationPlan`` is built.
"""

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Optional, Union

from .engine import Integrator, Scheme, SimulationPlan
from .exceptions import ConfigError
from .model import J1_FIRST_MAXIMUM, GateKind, mhz_to_angular, modulation_ratio
from .noise import GAUSS1, GAUSS2, IDEAL, Gaussian, PulseErrorModel
from .parser import ConfigParser, ConfigTextBuilder

PULSE_MODELS = ("ideal", "gauss1", "gauss2", "custom")
_PRESET_MODELS = {"ideal": IDEAL, "gauss1": GAUSS1, "gauss2": GAUSS2}
_TRUE = frozenset({"1", "true", "yes", "on"})
_FALSE = frozenset({"0", "false", "no", "off"})


@dataclass(frozen=True)
class ExperimentConfig:
    """One fidelity experiment. The defaults are the reference DD versus no-DD setup."""

    gate: str = "u3"
    scheme: str = "dd"
    pulse_model: str = "ideal"
    pulse_mean: float = 0.0
    pulse_std: float = 0.0
    n_states: int = 50
    n_cycles: int = 1
    noise_lo: float = 1.0
    noise_hi: float = 10.0
    segments_per_cycle: int = 800
    seed: int = 1
    integrator: str = "segment_exponential"
    random_sign: bool = False
    shared_noise: bool = False
    coupling_mhz: float = 10.0
    gate_angle: float = math.pi / 4
    beta: float = J1_FIRST_MAXIMUM
    workers: int = 1

    def __post_init__(self) -> None:
        try:
            GateKind.parse(self.gate)
        except ValueError as e:
            raise ConfigError(str(e), "gate") from e
        try:
            Scheme.parse(self.scheme)
        except ValueError as e:
            raise ConfigError(str(e), "scheme") from e
        try:
            Integrator(self.integrator)
        except ValueError as e:
            raise ConfigError(f"Unknown integrator: {self.integrator!r}", "integrator") from e
        if self.pulse_model not in PULSE_MODELS:
            raise ConfigError(f"pulse_model must be one of {PULSE_MODELS}, got {self.pulse_model!r}", "pulse_model")
        if self.pulse_std < 0:
            raise ConfigError(f"pulse_std must be non-negative, got {self.pulse_std}", "pulse_std")
        for key in ("n_states", "n_cycles", "segments_per_cycle", "workers"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be at least 1, got {getattr(self, key)}", key)
        if self.segments_per_cycle % 16:
            raise ConfigError(
                f"segments_per_cycle must be a multiple of 16, got {self.segments_per_cycle}",
                "segments_per_cycle",
            )
        if self.noise_lo > self.noise_hi:
            raise ConfigError(f"noise_lo {self.noise_lo} exceeds noise_hi {self.noise_hi}", "noise_lo")
        if self.coupling_mhz == 0:
            raise ConfigError("coupling_mhz must be non-zero", "coupling_mhz")
        if not self.gate_angle > 0:
            raise ConfigError(f"gate_angle must be positive, got {self.gate_angle}", "gate_angle")
        try:
            modulation_ratio(self.beta)
        except ValueError as e:
            raise ConfigError(str(e), "beta") from e

    @property
    def gate_kind(self) -> GateKind:
        return GateKind.parse(self.gate)

    @property
    def scheme_kind(self) -> Scheme:
        return Scheme.parse(self.scheme)

    @property
    def noise_bounds(self) -> tuple[float, float]:
        """``(lo, hi)`` in rad/s."""
        return mhz_to_angular(self.noise_lo), mhz_to_angular(self.noise_hi)

    def pulse_error(self) -> PulseErrorModel:
        if self.pulse_model == "custom":
            return Gaussian(self.pulse_mean, self.pulse_std, label="custom")
        return _PRESET_MODELS[self.pulse_model]

    def plan(self) -> SimulationPlan:
        return SimulationPlan.for_gate(
            self.gate_kind,
            angle=self.gate_angle,
            coupling=mhz_to_angular(self.coupling_mhz),
            n_cycles=self.n_cycles,
            pulse_error=self.pulse_error(),
            integrator=Integrator(self.integrator),
            scheme=self.scheme_kind,
            beta=self.beta,
        )

    def replace(self, **overrides: Any) -> "ExperimentConfig":
        """Copy with ``overrides`` applied; ``None`` values are skipped."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        names = {f.name for f in fields(self)}
        for key in overrides:
            if key not in names:
                raise ConfigError(f"Unknown config key {key!r}", key)
        return dataclasses.replace(self, **overrides)

    def to_dict(self) -> dict[str, str]:
        """Field values as config-file text, floats written with ``repr``."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                out[f.name] = str(value).lower()
            elif isinstance(value, float):
                out[f.name] = repr(value)
            else:
                out[f.name] = str(value)
        return out

    @classmethod
    def from_dict(cls, values: dict[str, str], base: Optional["ExperimentConfig"] = None) -> "ExperimentConfig":
        base = base or cls()
        types = {f.name: f.type for f in fields(cls)}
        parsed = {}
        for key, text in values.items():
            if key not in types:
                raise ConfigError(f"Unknown config key {key!r}", key)
            parsed[key] = _coerce(key, text, types[key])
        return base.replace(**parsed)


def _coerce(key: str, text: str, kind: type) -> Any:
    text = text.strip()
    if kind is bool:
        low = text.lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise ConfigError(f"{key} must be a boolean, got {text!r}", key)
    if kind is str:
        return text
    try:
        return kind(text)
    except ValueError as e:
        raise ConfigError(f"{key} must be {kind.__name__}, got {text!r}", key) from e


def config_text(config: ExperimentConfig) -> str:
    return ConfigTextBuilder.build(config.to_dict())


def parse_config(text: str, base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    return ExperimentConfig.from_dict(ConfigParser.parse(text), base)


def load_config(path: Union[str, Path], base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    return parse_config(text, base)


def dump_config(config: ExperimentConfig, path: Union[str, Path]) -> None:
    Path(path).write_text(config_text(config))
