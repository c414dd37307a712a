"""Time-ordered propagation of gate + noise through a decoupling cycle.

The total Hamiltonian is piecewise constant: each noise segment carries one
row of error coefficients on top of the coupling scheduled for its interval.
Segment exponentials come from a batched Hermitian eigendecomposition and
are multiplied in time order by pairwise reduction (later factors on the
left). Pulses are instantaneous rotations applied between intervals.

Example:
    >>> plan = SimulationPlan.for_gate(GateKind.FLIP_FLOP)
    >>> noise = NoiseTrajectory.zeros(800, plan.segment_duration(800))
    >>> result = simulate(plan, noise)
    >>> round(overlap_fidelity(ideal_gate(plan.gate_kind, plan.gate_angle), result.propagator), 9)
    1.0
"""

import csv
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .exceptions import (
    DimensionError,
    MisalignedTrajectoryError,
    NotHermitianError,
    UnsupportedPulseError,
)
from .fidelity import overlap_fidelity
from .model import (
    J1_FIRST_MAXIMUM,
    GateKind,
    coupling_operator,
    crosstalk_term,
    error_basis,
    mhz_to_angular,
    scheduled_hamiltonian,
    target_form,
    target_hamiltonian,
)
from .noise import IDEAL, NoiseTrajectory, PulseErrorModel, RngLike, as_generator
from .pauli import Operator, PauliString, max_norm, to_matrix, unitarity_defect
from .sequence import (
    CouplingSchedule,
    DDSequence,
    build_full_cycle,
    coupling_schedule,
    toggling_frames,
)

logger = logging.getLogger(__name__)

DEFAULT_COUPLING = mhz_to_angular(10.0)
DEFAULT_ANGLE = math.pi / 4
HERMITIAN_TOLERANCE = 1e-12
UNITARITY_TOLERANCE = 1e-8

_SINGLE = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_EYE2 = np.eye(2, dtype=complex)


class Integrator(str, Enum):
    SEGMENT_EXPONENTIAL = "segment_exponential"
    RUNGE_KUTTA_4 = "runge_kutta_4"


class Scheme(str, Enum):
    NO_DD = "no_dd"
    DD = "dd"

    @classmethod
    def parse(cls, value: Union["Scheme", str]) -> "Scheme":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("none", "no_dd", "nodd"):
            return cls.NO_DD
        if key == "dd":
            return cls.DD
        raise ValueError(f"Unknown scheme: {value!r}")


@dataclass(frozen=True)
class SimulationPlan:
    """Everything that fixes one gate execution except the random draws.

    ``tau`` is the duration of one interval; the gate angle is
    ``|coupling| · intervals · tau · n_cycles``.
    """

    gate_kind: GateKind
    sequence: DDSequence
    schedule: CouplingSchedule
    tau: float
    n_cycles: int = 1
    pulse_error: PulseErrorModel = IDEAL
    integrator: Integrator = Integrator.SEGMENT_EXPONENTIAL
    scheme: Scheme = Scheme.DD
    coupling: float = DEFAULT_COUPLING
    crosstalk: float = 0.0
    beta: float = J1_FIRST_MAXIMUM

    def __post_init__(self) -> None:
        object.__setattr__(self, "gate_kind", GateKind.parse(self.gate_kind))
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        object.__setattr__(self, "integrator", Integrator(self.integrator))
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.n_cycles < 1:
            raise ValueError(f"n_cycles must be at least 1, got {self.n_cycles}")
        if self.sequence.n_qubits != 2:
            raise DimensionError(f"Engine propagates two qubits, sequence has {self.sequence.n_qubits}")
        if len(self.schedule) != self.sequence.cycle_intervals:
            raise DimensionError(
                f"Schedule has {len(self.schedule)} steps for {self.sequence.cycle_intervals} intervals"
            )
        if self.schedule.gate_kind is not self.gate_kind:
            raise ValueError(
                f"Schedule is for {self.schedule.gate_kind.value}, plan is for {self.gate_kind.value}"
            )

    @classmethod
    def for_gate(
        cls,
        gate_kind: Union[GateKind, str],
        angle: float = DEFAULT_ANGLE,
        coupling: float = DEFAULT_COUPLING,
        n_cycles: int = 1,
        **kwargs,
    ) -> "SimulationPlan":
        """Full cycle and the standard coupling schedule, with ``tau`` chosen so the gate angle is ``angle``."""
        gate_kind = GateKind.parse(gate_kind)
        sequence = kwargs.pop("sequence", None)
        if sequence is None:
            sequence = build_full_cycle()
        schedule = kwargs.pop("schedule", None)
        if schedule is None:
            schedule = coupling_schedule(gate_kind)
        if n_cycles < 1:
            raise ValueError(f"n_cycles must be at least 1, got {n_cycles}")
        if coupling == 0 or angle <= 0:
            raise ValueError(f"Need a non-zero coupling and positive angle, got {coupling}, {angle}")
        tau = angle / (abs(coupling) * sequence.cycle_intervals * n_cycles)
        return cls(gate_kind, sequence, schedule, tau, n_cycles, coupling=coupling, **kwargs)

    @property
    def intervals(self) -> int:
        """Intervals over all cycles."""
        return self.sequence.cycle_intervals * self.n_cycles

    @property
    def cycle_duration(self) -> float:
        return self.tau * self.sequence.cycle_intervals

    @property
    def total_duration(self) -> float:
        return self.cycle_duration * self.n_cycles

    @property
    def gate_angle(self) -> float:
        return abs(self.coupling) * self.total_duration

    def segment_duration(self, n_segments: int) -> float:
        """Segment length that spreads ``n_segments`` over the whole gate."""
        return self.total_duration / n_segments

    def target(self) -> Operator:
        return target_hamiltonian(self.gate_kind, self.coupling)

    def interval_hamiltonians(self) -> list[Operator]:
        """System Hamiltonian of each interval in one cycle, crosstalk included."""
        extra = crosstalk_term(self.crosstalk)
        if self.scheme is Scheme.NO_DD:
            return [self.target() + extra] * self.sequence.cycle_intervals
        return [
            scheduled_hamiltonian(self.gate_kind, e.sign, e.form, self.coupling, self.beta) + extra
            for e in self.schedule.entries
        ]


@dataclass(frozen=True)
class TracePoint:
    """State of the run at the end of one interval."""

    time: float
    interval: int
    frame: str
    fidelity: float


@dataclass(frozen=True)
class PropagationResult:
    propagator: Operator
    frames: tuple[PauliString, ...]
    unitarity_defect: float
    trace: tuple[TracePoint, ...] = ()

    def write_trace_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["time", "interval", "frame", "fidelity"])
            for p in self.trace:
                writer.writerow([repr(p.time), p.interval, p.frame, repr(p.fidelity)])


def _check_hermitian(hs: np.ndarray) -> None:
    scale = max(1.0, max_norm(hs))
    asym = np.max(np.abs(hs - np.conj(np.swapaxes(hs, -1, -2))))
    if asym > HERMITIAN_TOLERANCE * scale:
        raise NotHermitianError(f"Generator is not Hermitian: max |H - H†| = {asym:.3e}")


def segment_propagators(hs: np.ndarray, dt: float) -> np.ndarray:
    """``exp(-i H dt)`` for a stack of Hermitian matrices of shape ``(..., d, d)``."""
    hs = np.asarray(hs, dtype=complex)
    _check_hermitian(hs)
    w, v = np.linalg.eigh(hs)
    phases = np.exp(-1j * w * dt)
    return (v * phases[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def segment_propagator(h: Operator, dt: float) -> Operator:
    """``exp(-i H dt)`` by Hermitian eigendecomposition."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {h.shape}")
    return segment_propagators(h[None], dt)[0]


def rk4_propagator(h: Operator, dt: float, steps: int = 1) -> Operator:
    """Fixed-step 4th-order Runge-Kutta solution of ``dU/dt = -iHU`` from ``U = I``."""
    h = np.asarray(h, dtype=complex)
    _check_hermitian(h)
    a = -1j * h
    step = dt / steps
    u = np.eye(h.shape[0], dtype=complex)
    for _ in range(steps):
        k1 = a @ u
        k2 = a @ (u + 0.5 * step * k1)
        k3 = a @ (u + 0.5 * step * k2)
        k4 = a @ (u + step * k3)
        u = u + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return u


def ordered_product(stack: np.ndarray) -> Operator:
    """``U[n-1] ... U[1] U[0]`` by pairwise reduction."""
    stack = np.asarray(stack)
    if stack.shape[0] == 0:
        raise ValueError("Empty propagator stack")
    while stack.shape[0] > 1:
        n = stack.shape[0]
        even = n - n % 2
        paired = stack[1:even:2] @ stack[0:even:2]
        stack = np.concatenate([paired, stack[even:]]) if n % 2 else paired
    return stack[0]


def apply_pulse(
    p: PauliString,
    model: PulseErrorModel = IDEAL,
    rng: Optional[RngLike] = None,
) -> Operator:
    """Unitary of an instantaneous π pulse with over-rotation.

    Every non-identity factor gets ``exp(-i(π/2 + ζ)σ)`` with its own ζ,
    drawn in qubit order.
    """
    if p.phase != 0:
        raise UnsupportedPulseError(f"Pulse {p} must have phase +1")
    bad = set(p.letters) - {"I", "X", "Z"}
    if bad:
        raise UnsupportedPulseError(f"Pulse {p} uses {sorted(bad)}; only X and Z pulses are physical")
    if p.n_qubits not in (1, 2):
        raise DimensionError(f"Pulses act on 1 or 2 qubits, got {p.n_qubits}")
    gen = None if rng is None else as_generator(rng)
    factors = []
    for letter in p.letters:
        if letter == "I":
            factors.append(_EYE2)
            continue
        sigma = _SINGLE[letter]
        zeta = 0.0
        if model != IDEAL:
            if gen is None:
                raise ValueError(f"Pulse model {model!r} needs a random stream")
            zeta = model.sample(gen)
        if zeta == 0.0:
            factors.append(-1j * sigma)
        else:
            theta = math.pi / 2 + zeta
            factors.append(math.cos(theta) * _EYE2 - 1j * math.sin(theta) * sigma)
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def _interval_propagators(plan: SimulationPlan, trajectory: NoiseTrajectory, per: int, dt: float) -> np.ndarray:
    system = np.stack(plan.interval_hamiltonians())
    m = plan.sequence.cycle_intervals
    which = (np.arange(trajectory.n_segments) // per) % m
    noise = np.einsum("sc,cij->sij", trajectory.coefficients, error_basis())
    hs = system[which] + noise

    if plan.integrator is Integrator.SEGMENT_EXPONENTIAL:
        segs = segment_propagators(hs, dt)
    else:
        segs = np.stack([rk4_propagator(h, dt) for h in hs])
    segs = segs.reshape(plan.intervals, per, *segs.shape[1:])
    return np.stack([ordered_product(block) for block in segs])


def _check_alignment(plan: SimulationPlan, trajectory: NoiseTrajectory) -> int:
    n_seg, n_int = trajectory.n_segments, plan.intervals
    if n_seg % n_int:
        raise MisalignedTrajectoryError(
            f"{n_seg} noise segments do not divide into {n_int} intervals"
        )
    if not math.isclose(trajectory.duration, plan.total_duration, rel_tol=1e-9):
        raise MisalignedTrajectoryError(
            f"Trajectory lasts {trajectory.duration:.6e} s, gate lasts {plan.total_duration:.6e} s"
        )
    return n_seg // n_int


def simulate(
    plan: SimulationPlan,
    trajectory: NoiseTrajectory,
    rng: Optional[RngLike] = None,
    trace: bool = False,
) -> PropagationResult:
    """Propagate one gate execution.

    Args:
        plan: Gate, cycle and timing
        trajectory: Noise spanning the whole gate; its segments must split
            evenly into the plan's intervals
        rng: ``zeta`` stream for pulse errors; unused with ideal pulses
        trace: Record a ``TracePoint`` after every interval
    """
    per = _check_alignment(plan, trajectory)
    gen = None if rng is None else as_generator(rng)
    blocks = _interval_propagators(plan, trajectory, per, trajectory.segment_duration)
    frames = toggling_frames(plan.sequence).frames
    m = plan.sequence.cycle_intervals
    dd = plan.scheme is Scheme.DD

    groups = plan.sequence.pulse_groups() if dd else [()] * (m + 1)
    logger.debug(
        "simulate %s/%s: %d intervals, %d segments each, tau=%.4e s",
        plan.gate_kind.value, plan.scheme.value, plan.intervals, per, plan.tau,
    )

    target = plan.target()
    points = []
    u = np.eye(4, dtype=complex)
    for cycle in range(plan.n_cycles):
        for k in range(m):
            for p in groups[k]:
                u = apply_pulse(p, plan.pulse_error, gen) @ u
            u = blocks[cycle * m + k] @ u
            if trace:
                index = cycle * m + k + 1
                frame = frames[k] if dd else PauliString.identity(2)
                t = index * plan.tau
                expected = to_matrix(frame.without_phase()) @ segment_propagator(target, t)
                points.append(TracePoint(t, index, frame.letters, overlap_fidelity(expected, u)))
        for p in groups[m]:
            u = apply_pulse(p, plan.pulse_error, gen) @ u

    defect = unitarity_defect(u)
    if defect >= UNITARITY_TOLERANCE:
        logger.warning("propagator unitarity defect %.3e exceeds %.0e", defect, UNITARITY_TOLERANCE)
    return PropagationResult(u, tuple(frames), defect, tuple(points))


def ideal_gate(gate_kind: Union[GateKind, str], angle: float) -> Operator:
    """Closed-form ``exp(-i·angle·C)`` for the unit coupling ``C`` of the gate."""
    kind = GateKind.parse(gate_kind)
    c = coupling_operator(kind, target_form(kind))
    eye = np.eye(4, dtype=complex)
    if kind is GateKind.FLIP_FLOP:
        # C has eigenvalues 0, ±1, so C² projects onto the single-excitation block
        return eye + (math.cos(angle) - 1.0) * (c @ c) - 1j * math.sin(angle) * c
    return math.cos(angle) * eye - 1j * math.sin(angle) * c


def crosstalk_scenario(
    plan: SimulationPlan,
    crosstalk_strength: float,
    trajectory: Optional[NoiseTrajectory] = None,
    rng: Optional[RngLike] = None,
    n_segments: int = 800,
) -> PropagationResult:
    """Run ``plan`` with a static ``J_ct σ_z σ_z`` term of fixed sign in every interval.

    Without a trajectory the run is noise-free with ``n_segments`` per cycle.
    """
    if plan.gate_kind is not GateKind.FLIP_FLOP:
        raise ValueError(f"Crosstalk scenario is defined for the flip-flop gate, got {plan.gate_kind.value}")
    plan = replace(plan, crosstalk=crosstalk_strength)
    if trajectory is None:
        total = n_segments * plan.n_cycles
        trajectory = NoiseTrajectory.zeros(total, plan.segment_duration(total))
    return simulate(plan, trajectory, rng)


@dataclass(frozen=True)
class SuppressionResult:
    scales: tuple[float, ...]
    infidelities: tuple[float, ...]
    slope: float


def suppression_slope(
    gate_kind: Union[GateKind, str] = GateKind.FLIP_FLOP,
    epsilon: float = mhz_to_angular(5.0),
    scales: tuple[float, float] = (1.0, 0.25),
    segments_per_interval: int = 50,
    angle: float = DEFAULT_ANGLE,
    coupling: float = DEFAULT_COUPLING,
    scheme: Union[Scheme, str] = Scheme.DD,
) -> SuppressionResult:
    """Log-log slope of one-cycle infidelity against the interval scale.

    At scale ``s`` the interval shrinks by ``s`` and the coupling grows by
    ``1/s``, so the gate angle is unchanged. Noise is the constant ``epsilon``
    in every channel.
    """
    infidelities = []
    for s in scales:
        plan = SimulationPlan.for_gate(gate_kind, angle, coupling / s, scheme=scheme)
        n = plan.intervals * segments_per_interval
        noise = NoiseTrajectory.constant(epsilon, n, plan.segment_duration(n))
        u = simulate(plan, noise).propagator
        infidelities.append(1.0 - overlap_fidelity(ideal_gate(plan.gate_kind, angle), u))
    lo, hi = scales[0], scales[-1]
    slope = math.log(infidelities[0] / infidelities[-1]) / math.log(lo / hi)
    logger.debug("suppression infidelities %s -> slope %.3f", infidelities, slope)
    return SuppressionResult(tuple(scales), tuple(infidelities), slope)
