"""Random-state gate fidelity.

The figure of merit is the pure-state overlap ``|<ψ_ideal|ψ_actual>|²``
averaged over Haar-random initial states. Dynamics are unitary throughout, so
this is the whole story; no process tomography is attempted.
"""

import csv
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from .exceptions import DimensionError, NormalizationError
from .noise import RngLike, as_generator
from .pauli import Operator

logger = logging.getLogger(__name__)

StateVector = np.ndarray

STATE_DIM = 4
NORM_TOLERANCE = 1e-6

REPORT_COLUMNS = ("gate", "scheme", "pulse_model", "n_cycles", "mean", "std", "n_states", "seed")


def random_state(rng: RngLike, dim: int = STATE_DIM) -> StateVector:
    """Haar-uniform pure state: normalized vector of standard complex Gaussians."""
    gen = as_generator(rng)
    z = gen.standard_normal(dim) + 1j * gen.standard_normal(dim)
    return z / np.linalg.norm(z)


def _check_normalized(psi: StateVector, name: str) -> None:
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise NormalizationError(f"{name} state has norm {norm!r}, expected 1")


def state_fidelity(ideal: StateVector, actual: StateVector) -> float:
    ideal = np.asarray(ideal)
    actual = np.asarray(actual)
    if ideal.shape != actual.shape:
        raise DimensionError(f"State shapes differ: {ideal.shape} vs {actual.shape}")
    _check_normalized(ideal, "ideal")
    _check_normalized(actual, "actual")
    return min(1.0, float(abs(np.vdot(ideal, actual)) ** 2))


def overlap_fidelity(u_ideal: Operator, u_actual: Operator) -> float:
    """Phase-insensitive operator overlap ``|Tr(U_ideal† U_actual)|² / d²``."""
    d = u_ideal.shape[0]
    return min(1.0, float(abs(np.trace(u_ideal.conj().T @ u_actual)) ** 2 / d ** 2))


@dataclass(frozen=True)
class FidelityReport:
    mean: float
    std: float
    n_states: int
    fidelities: tuple[float, ...]

    @classmethod
    def from_fidelities(cls, values: Sequence[float]) -> "FidelityReport":
        """Fold per-state values in the order given; ``std`` uses ``ddof=1``."""
        arr = np.asarray(values, dtype=float)
        if arr.size < 1:
            raise ValueError("Report needs at least one fidelity")
        std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        mean = float(np.clip(arr.mean(), arr.min(), arr.max()))
        return cls(mean, std, int(arr.size), tuple(float(v) for v in arr))

    def csv_row(self, gate: str, scheme: str, pulse_model: str, n_cycles: int, seed: int) -> list[str]:
        return [
            gate, scheme, pulse_model, str(n_cycles),
            f"{self.mean:.10f}", f"{self.std:.10f}", str(self.n_states), str(seed),
        ]


def write_report_csv(rows: Sequence[Sequence[str]], out: IO[str], header: bool = True) -> None:
    writer = csv.writer(out, lineterminator="\n")
    if header:
        writer.writerow(REPORT_COLUMNS)
    writer.writerows(rows)


def average_gate_fidelity(
    u_ideal: Operator,
    u_actual: Union[Operator, Sequence[Operator]],
    n_states: int,
    rng: RngLike,
) -> FidelityReport:
    """Mean state fidelity of ``u_actual`` against ``u_ideal`` over random states.

    Args:
        u_ideal: Target gate
        u_actual: One propagator shared by every state, or one per state
            (state ``k`` goes through ``u_actual[k]``)
        n_states: Number of Haar-random initial states
        rng: Source of the states
    """
    if n_states < 1:
        raise ValueError(f"n_states must be at least 1, got {n_states}")
    u_ideal = np.asarray(u_ideal)
    if isinstance(u_actual, np.ndarray) and u_actual.ndim == 2:
        per_state = [u_actual] * n_states
    else:
        per_state = list(u_actual)
        if len(per_state) != n_states:
            raise ValueError(f"Got {len(per_state)} propagators for {n_states} states")
    gen = as_generator(rng)
    values = []
    for u in per_state:
        psi = random_state(gen, u_ideal.shape[0])
        values.append(state_fidelity(u_ideal @ psi, u @ psi))
    logger.debug("averaged %d states", n_states)
    return FidelityReport.from_fidelities(values)
