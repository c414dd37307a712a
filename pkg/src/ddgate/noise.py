"""Seeded stochastic noise: error-coefficient trajectories and pulse over-rotations.

Every random draw comes from an ``RngStream``: a master seed plus a stream id
``(trial, purpose, salt)``. Streams are independent PCG64 generators spawned
through ``numpy.random.SeedSequence``, so a given stream reproduces the same
draws on any platform and switching pulse errors on or off never disturbs the
noise trajectory of a trial.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .model import ERROR_CHANNELS, ErrorCoefficients, mhz_to_angular

logger = logging.getLogger(__name__)

DEFAULT_LOW = mhz_to_angular(1.0)
DEFAULT_HIGH = mhz_to_angular(10.0)
SEGMENTS_PER_CYCLE = 800

_PURPOSES = {"trajectory": 0, "zeta": 1, "state": 2}


@dataclass(frozen=True)
class RngStream:
    """Identity of one independent random stream."""

    seed: int
    trial: int = 0
    purpose: str = "trajectory"
    salt: int = 0

    def __post_init__(self) -> None:
        if self.purpose not in _PURPOSES:
            raise ValueError(f"Unknown stream purpose {self.purpose!r}; use one of {sorted(_PURPOSES)}")

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of the stream."""
        entropy = [self.seed & 0xFFFFFFFFFFFFFFFF, self.salt, self.trial, _PURPOSES[self.purpose]]
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


RngLike = Union[RngStream, np.random.Generator]


def as_generator(rng: RngLike) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngStream) else rng


@dataclass(frozen=True)
class NoiseTrajectory:
    """Piecewise-constant channel strengths, one row of 15 per time segment."""

    segment_duration: float
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.array(self.coefficients, dtype=float)
        if coeffs.ndim != 2 or coeffs.shape[1] != len(ERROR_CHANNELS) or coeffs.shape[0] < 1:
            raise ValueError(f"Coefficients must have shape (n, {len(ERROR_CHANNELS)}), got {coeffs.shape}")
        if not self.segment_duration > 0:
            raise ValueError(f"segment_duration must be positive, got {self.segment_duration}")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n_segments(self) -> int:
        return self.coefficients.shape[0]

    @property
    def duration(self) -> float:
        return self.n_segments * self.segment_duration

    def segment(self, index: int) -> ErrorCoefficients:
        return ErrorCoefficients.from_array(self.coefficients[index])

    @classmethod
    def constant(cls, value: float, n_segments: int, segment_duration: float) -> "NoiseTrajectory":
        return cls(segment_duration, np.full((n_segments, len(ERROR_CHANNELS)), float(value)))

    @classmethod
    def zeros(cls, n_segments: int, segment_duration: float) -> "NoiseTrajectory":
        return cls.constant(0.0, n_segments, segment_duration)

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write ``segment, <15 channels>`` in rad/s."""
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["segment", *ERROR_CHANNELS])
            for k, row in enumerate(self.coefficients):
                writer.writerow([k, *(repr(float(v)) for v in row)])


def sample_trajectory(
    rng: RngLike,
    n_segments: int = SEGMENTS_PER_CYCLE,
    lo: float = DEFAULT_LOW,
    hi: float = DEFAULT_HIGH,
    segment_duration: float = 1.0,
    random_sign: bool = False,
) -> NoiseTrajectory:
    """Draw every channel of every segment independently from ``U[lo, hi]``.

    With ``random_sign`` each value also gets an independent ±1 factor.
    """
    if lo > hi:
        raise ValueError(f"lo must not exceed hi, got lo={lo}, hi={hi}")
    if n_segments < 1:
        raise ValueError(f"n_segments must be positive, got {n_segments}")
    gen = as_generator(rng)
    shape = (n_segments, len(ERROR_CHANNELS))
    coeffs = lo + (hi - lo) * gen.random(shape)
    if random_sign:
        coeffs *= np.where(gen.random(shape) < 0.5, -1.0, 1.0)
    return NoiseTrajectory(segment_duration, coeffs)


class PulseErrorModel:
    """Base class for pulse over-rotation models."""

    label = "custom"

    def sample(self, rng: np.random.Generator) -> float:
        """Draw one over-rotation angle ζ in radians.

        Args:
            rng: Generator of the ``zeta`` stream
        """
        raise NotImplementedError


class Ideal(PulseErrorModel):
    """Perfect π pulses."""

    label = "ideal"

    def sample(self, rng: np.random.Generator) -> float:
        return 0.0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ideal)

    def __hash__(self) -> int:
        return hash(Ideal)

    def __repr__(self) -> str:
        return "Ideal()"


class Gaussian(PulseErrorModel):
    """Normally distributed over-rotation."""

    def __init__(self, mean: float, std: float, label: str = "custom") -> None:
        """Initialize Gaussian.

        Args:
            mean: Mean over-rotation in radians
            std: Standard deviation in radians
            label: Name used in reports
        """
        if std < 0:
            raise ValueError(f"std must be non-negative, got {std}")
        self.mean = float(mean)
        self.std = float(std)
        self.label = label

    def sample(self, rng: np.random.Generator) -> float:
        return float(rng.normal(self.mean, self.std))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Gaussian) and (self.mean, self.std) == (other.mean, other.std)

    def __hash__(self) -> int:
        return hash((self.mean, self.std))

    def __repr__(self) -> str:
        return f"Gaussian(mean={self.mean!r}, std={self.std!r})"


IDEAL = Ideal()
GAUSS1 = Gaussian(math.pi / 500, math.pi / 500, label="gauss1")
GAUSS2 = Gaussian(math.pi / 200, math.pi / 200, label="gauss2")


def sample_zeta(rng: RngLike, model: PulseErrorModel) -> float:
    return model.sample(as_generator(rng))
