"""Decoupling sequences, toggling frames and coupling schedules.

Sequences are flat, time-ordered lists of ``Pulse`` and ``Interval`` steps.
Several pulses may sit back to back between two intervals; they are applied
in list order at the same instant.

Frame convention (fixed project-wide): the frame of interval ``k`` is the
product of every pulse applied before it, later pulses multiplied on the
left. An error ``E`` acts in interval ``k`` as ``F_k E F_k``.

Example:
    >>> from ddgate.pauli import error_set
    >>> seq = build_full_cycle(1, 2)
    >>> seq.cycle_intervals
    16
    >>> all(first_order_sum(seq, e) == 0 for e in error_set())
    True
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .exceptions import DimensionError
from .model import (
    J1_FIRST_MAXIMUM,
    CouplingForm,
    GateKind,
    scheduled_hamiltonian,
    target_form,
    target_hamiltonian,
)
from .pauli import (
    Operator,
    PauliLike,
    PauliString,
    as_pauli,
    conjugate,
    max_norm,
    multiply,
    pair,
    product,
    to_matrix,
)

logger = logging.getLogger(__name__)

CYCLE_INTERVALS = 16
SCHEDULE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Pulse:
    """Instantaneous π pulse; the Pauli string must have phase +1."""

    pauli: PauliString

    def __post_init__(self) -> None:
        object.__setattr__(self, "pauli", as_pauli(self.pauli))
        if self.pauli.phase != 0:
            raise ValueError(f"Pulse {self.pauli} must have phase +1")

    @property
    def is_physical(self) -> bool:
        """True when the pulse only uses σ_x and σ_z factors."""
        return "Y" not in self.pauli.letters


@dataclass(frozen=True)
class Interval:
    """Free evolution for one τ; ``index`` is the 1-based step within the cycle."""

    index: int


Step = Union[Pulse, Interval]


@dataclass(frozen=True)
class DDSequence:
    n_qubits: int
    steps: tuple[Step, ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        for step in self.steps:
            if isinstance(step, Pulse) and step.pauli.n_qubits != self.n_qubits:
                raise DimensionError(f"Pulse {step.pauli} does not act on {self.n_qubits} qubits")

    @property
    def cycle_intervals(self) -> int:
        return sum(1 for s in self.steps if isinstance(s, Interval))

    @property
    def pulses(self) -> tuple[PauliString, ...]:
        return tuple(s.pauli for s in self.steps if isinstance(s, Pulse))

    @property
    def is_physical(self) -> bool:
        return all(s.is_physical for s in self.steps if isinstance(s, Pulse))

    def pulse_groups(self) -> list[tuple[PauliString, ...]]:
        """Pulses before interval 1, between each pair of intervals, and after the last.

        Always ``cycle_intervals + 1`` groups; a group may be empty.
        """
        groups: list[tuple[PauliString, ...]] = []
        pending: list[PauliString] = []
        for step in self.steps:
            if isinstance(step, Pulse):
                pending.append(step.pauli)
            else:
                groups.append(tuple(pending))
                pending = []
        groups.append(tuple(pending))
        return groups

    def net_pulse(self) -> PauliString:
        return product(list(self.pulses), self.n_qubits)

    def to_text(self) -> str:
        from .parser import SequenceTextBuilder

        return SequenceTextBuilder.build(self)

    @classmethod
    def from_text(cls, text: str, name: str = "custom") -> "DDSequence":
        from .parser import SequenceParser

        return SequenceParser.parse(text, name=name)


@dataclass(frozen=True)
class TogglingFrame:
    """Per-interval frames ``F_1..F_m`` and the net product of all pulses."""

    frames: tuple[PauliString, ...]
    net: PauliString

    def __len__(self) -> int:
        return len(self.frames)

    def __getitem__(self, k: int) -> PauliString:
        return self.frames[k]

    @property
    def net_is_identity(self) -> bool:
        return self.net.is_identity


def _bracket(wrappers: list[Optional[PauliString]], body: list[Step]) -> list[Step]:
    """``(W_m body W_m) ... (W_2 body W_2)(body)`` laid out in time order.

    ``wrappers`` is in time order; ``None`` means the bare block.
    """
    steps: list[Step] = []
    for wrapper in wrappers:
        if wrapper is not None:
            steps.append(Pulse(wrapper))
        steps.extend(body)
        if wrapper is not None:
            steps.append(Pulse(wrapper))
    return steps


def _wrappers(letter: str, i: int, j: int, n_qubits: int) -> list[Optional[PauliString]]:
    # time order: bare, both qubits, qubit i, qubit j
    return [
        None,
        pair(letter, letter, i, j, n_qubits),
        PauliString.single(letter, i, n_qubits),
        PauliString.single(letter, j, n_qubits),
    ]


def _renumber(steps: list[Step]) -> tuple[Step, ...]:
    out: list[Step] = []
    k = 0
    for step in steps:
        if isinstance(step, Interval):
            k += 1
            out.append(Interval(k))
        else:
            out.append(step)
    return tuple(out)


def _check_qubits(i: int, j: int, n_qubits: int) -> None:
    if i == j:
        raise DimensionError(f"Sequence needs two distinct qubits, got i = j = {i}")
    for q in (i, j):
        if not 1 <= q <= n_qubits:
            raise DimensionError(f"Qubit {q} outside 1..{n_qubits}")


def _mergeable(p: PauliString, q: PauliString) -> bool:
    axes = set(p.letters + q.letters) - {"I"}
    return len(axes) <= 1


def simplify(seq: DDSequence) -> DDSequence:
    """Merge back-to-back pulses about the same axis and drop identity pulses.

    σ_x pulses merge with σ_x pulses and σ_z with σ_z; a σ_x pulse next to a
    σ_z pulse stays a separate pulse.
    """
    out: list[Step] = []
    for step in seq.steps:
        if isinstance(step, Pulse) and out and isinstance(out[-1], Pulse) \
                and _mergeable(out[-1].pauli, step.pauli):
            merged = multiply(step.pauli, out[-1].pauli)
            out.pop()
            if not merged.is_identity:
                out.append(Pulse(merged))
            continue
        if isinstance(step, Pulse) and step.pauli.is_identity:
            continue
        out.append(step)
    return DDSequence(seq.n_qubits, _renumber(out), seq.name)


def _single_axis_sequence(letter: str, i: int, j: int, n_qubits: int, name: str) -> DDSequence:
    _check_qubits(i, j, n_qubits)
    steps = _bracket(_wrappers(letter, i, j, n_qubits), [Interval(1)])
    return simplify(DDSequence(n_qubits, _renumber(steps), name))


def build_x_sequence(i: int = 1, j: int = 2, n_qubits: int = 2) -> DDSequence:
    """Four intervals under frames ``I, X_iX_j, X_i, X_j``; removes the σ_x-anticommuting errors."""
    return _single_axis_sequence("X", i, j, n_qubits, "x")


def build_z_sequence(i: int = 1, j: int = 2, n_qubits: int = 2) -> DDSequence:
    """Four intervals under frames ``I, Z_iZ_j, Z_i, Z_j``."""
    return _single_axis_sequence("Z", i, j, n_qubits, "z")


def build_nested_cycle(i: int = 1, j: int = 2, n_qubits: int = 2) -> DDSequence:
    """Z-type sequence wrapped around the X-type sequence, every pulse kept."""
    _check_qubits(i, j, n_qubits)
    inner = _bracket(_wrappers("X", i, j, n_qubits), [Interval(1)])
    steps = _bracket(_wrappers("Z", i, j, n_qubits), inner)
    return DDSequence(n_qubits, _renumber(steps), "nested")


def build_full_cycle(i: int = 1, j: int = 2, n_qubits: int = 2) -> DDSequence:
    """The 16-interval concatenated cycle with merged pulses."""
    seq = simplify(build_nested_cycle(i, j, n_qubits))
    return replace(seq, name="full")


def xy4_preset() -> DDSequence:
    """Single-qubit XY4: ``τ X τ Y τ X τ Y``."""
    x, y = PauliString("X"), PauliString("Y")
    steps = (Interval(1), Pulse(x), Interval(2), Pulse(y), Interval(3), Pulse(x), Interval(4), Pulse(y))
    return DDSequence(1, steps, "xy4")


def toggling_frames(seq: DDSequence) -> TogglingFrame:
    frames = []
    acc = PauliString.identity(seq.n_qubits)
    for step in seq.steps:
        if isinstance(step, Pulse):
            acc = multiply(step.pauli, acc)
        else:
            frames.append(acc)
    return TogglingFrame(tuple(frames), acc)


def interval_signs(seq: DDSequence, error: PauliLike) -> tuple[int, ...]:
    """Sign ``s_k`` with ``F_k E F_k = s_k E`` for every interval."""
    error = as_pauli(error)
    if error.phase != 0:
        raise ValueError(f"Error operator {error} must have phase +1")
    frames = toggling_frames(seq).frames
    return tuple(conjugate(f.without_phase(), error).sign for f in frames)


def first_order_sum(seq: DDSequence, error: PauliLike) -> int:
    return sum(interval_signs(seq, error))


@dataclass(frozen=True)
class ScheduleEntry:
    sign: int
    form: CouplingForm

    def __str__(self) -> str:
        mark = "*" if self.form is CouplingForm.DOUBLE_EXCITATION else ""
        return f"{'+' if self.sign > 0 else '-'}J{mark}"


@dataclass(frozen=True)
class CouplingSchedule:
    """Coupling sign and form for each of the 16 intervals of the full cycle."""

    gate_kind: GateKind
    entries: tuple[ScheduleEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(e.sign for e in self.entries)

    def corrupted(self, step: int) -> "CouplingSchedule":
        """Copy with the sign of ``step`` (1-based) flipped."""
        if not 1 <= step <= len(self.entries):
            raise ValueError(f"Step {step} outside 1..{len(self.entries)}")
        entries = list(self.entries)
        e = entries[step - 1]
        entries[step - 1] = ScheduleEntry(-e.sign, e.form)
        return CouplingSchedule(self.gate_kind, tuple(entries))

    @classmethod
    def constant(cls, gate_kind: GateKind, n_steps: int = CYCLE_INTERVALS) -> "CouplingSchedule":
        """Target form with ``+J`` at every step (what a schedule-free run applies)."""
        gate_kind = GateKind.parse(gate_kind)
        entry = ScheduleEntry(1, target_form(gate_kind))
        return cls(gate_kind, (entry,) * n_steps)


_STAR_STEPS = frozenset({3, 4, 7, 8, 11, 12, 15, 16})

_SCHEDULE_SIGNS = {
    GateKind.FLIP_FLOP: "++++++++--------",
    GateKind.ZZ: "++--++--++--++--",
    GateKind.XX: "++++++++--------",
    GateKind.ZX: "+--+-++-+--+-++-",
}


def coupling_schedule(gate_kind: Union[GateKind, str]) -> CouplingSchedule:
    gate_kind = GateKind.parse(gate_kind)
    entries = []
    for k, s in enumerate(_SCHEDULE_SIGNS[gate_kind], start=1):
        if gate_kind is GateKind.FLIP_FLOP:
            form = CouplingForm.DOUBLE_EXCITATION if k in _STAR_STEPS else CouplingForm.FLIP_FLOP
        else:
            form = CouplingForm.PLAIN
        entries.append(ScheduleEntry(1 if s == "+" else -1, form))
    return CouplingSchedule(gate_kind, tuple(entries))


def schedule_mismatches(
    seq: DDSequence,
    sched: CouplingSchedule,
    target: Operator,
    coupling: float = 1.0,
    beta: float = J1_FIRST_MAXIMUM,
) -> list[int]:
    """1-based steps where ``F_k H_k F_k`` differs from ``target``."""
    frames = toggling_frames(seq).frames
    if len(frames) != len(sched):
        raise DimensionError(
            f"Sequence has {len(frames)} intervals, schedule has {len(sched)} steps"
        )
    target = np.asarray(target)
    if target.shape != (2 ** seq.n_qubits,) * 2:
        raise DimensionError(f"Target shape {target.shape} does not fit {seq.n_qubits} qubits")
    bad = []
    for k, (frame, entry) in enumerate(zip(frames, sched.entries), start=1):
        f = to_matrix(frame.without_phase())
        h = scheduled_hamiltonian(sched.gate_kind, entry.sign, entry.form, coupling, beta)
        if max_norm(f @ h @ f - target) >= SCHEDULE_TOLERANCE * max(1.0, abs(coupling)):
            bad.append(k)
    if bad:
        logger.debug("schedule %s fails at steps %s", sched.gate_kind.value, bad)
    return bad


def verify_schedule(
    seq: DDSequence,
    sched: CouplingSchedule,
    target: Optional[Operator] = None,
    coupling: float = 1.0,
) -> bool:
    """True iff every frame maps its scheduled coupling onto ``target``.

    ``target`` defaults to the gate kind's own coupling at strength ``coupling``.
    """
    if target is None:
        target = target_hamiltonian(sched.gate_kind, coupling)
    return not schedule_mismatches(seq, sched, target, coupling)


def frames_agree(a: DDSequence, b: DDSequence) -> bool:
    """Interval-by-interval frame equality up to global phase."""
    fa, fb = toggling_frames(a).frames, toggling_frames(b).frames
    return len(fa) == len(fb) and all(x.letters == y.letters for x, y in zip(fa, fb))
