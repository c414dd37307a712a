"""Gate and error Hamiltonians as dense two-qubit operators.

Covers the tunable gate Hamiltonian (drive + flip-flop coupling), its
transmon realization with a Bessel-weighted coupling, the pure
qubit-qubit couplings (ZZ, XX, ZX) and the 15-channel stochastic error
Hamiltonian. All frequencies are angular (rad/s); ``mhz_to_angular`` does
the conversion at the edges.
"""

import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import j1

from .pauli import Operator, error_set, pair, to_matrix

TWO_PI = 2.0 * math.pi

# first maximum of J1
J1_FIRST_MAXIMUM = 1.8411837813406593
# |J1(beta)| below this cannot carry a coupling
J1_ZERO_TOLERANCE = 1e-6

SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_EYE2 = np.eye(2, dtype=complex)


def mhz_to_angular(mhz: float) -> float:
    """MHz -> rad/s."""
    return TWO_PI * 1e6 * mhz


def angular_to_mhz(omega: float) -> float:
    return omega / (TWO_PI * 1e6)


class GateKind(str, Enum):
    """Coupling type a two-qubit gate is generated by."""

    FLIP_FLOP = "flipflop"
    ZZ = "zz"
    XX = "xx"
    ZX = "zx"

    @classmethod
    def parse(cls, value: Union["GateKind", str]) -> "GateKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        if key in _GATE_ALIASES:
            return cls(_GATE_ALIASES[key])
        for kind in cls:
            if key in (kind.value, kind.name.lower().replace("_", "")):
                return kind
        raise ValueError(f"Unknown gate kind: {value!r}")

    @property
    def label(self) -> str:
        """Short gate name: ``u3``, ``ue1``, ``ue2`` or ``ue3``."""
        return GATE_NAMES[self.value]


# gate names used on the command line and in config files
_GATE_ALIASES = {"u3": "flipflop", "ue1": "zz", "ue2": "xx", "ue3": "zx"}
GATE_NAMES = {v: k for k, v in _GATE_ALIASES.items()}


class CouplingForm(str, Enum):
    FLIP_FLOP = "flipflop"
    DOUBLE_EXCITATION = "double_excitation"
    PLAIN = "plain"


def _on_qubit(single: np.ndarray, qubit: int) -> Operator:
    return np.kron(single, _EYE2) if qubit == 1 else np.kron(_EYE2, single)


def _on_pair(a: np.ndarray, b: np.ndarray, i: int, j: int) -> Operator:
    return np.kron(a, b) if (i, j) == (1, 2) else np.kron(b, a)


def _check_pair(i: int, j: int) -> None:
    if {i, j} != {1, 2}:
        raise ValueError(f"Two-qubit operators need qubits 1 and 2, got {i}, {j}")


def _check_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value}")


@dataclass(frozen=True)
class H1Params:
    """Drive on ``qubit`` plus flip-flop coupling to ``partner``."""

    delta: float = 0.0
    omega: float = 0.0
    phi: float = 0.0
    coupling: float = 0.0
    qubit: int = 1
    partner: int = 2

    def __post_init__(self) -> None:
        _check_finite(delta=self.delta, omega=self.omega, phi=self.phi, coupling=self.coupling)
        if not 0.0 <= self.phi < TWO_PI:
            raise ValueError(f"phi must lie in [0, 2π), got {self.phi}")
        _check_pair(self.qubit, self.partner)


def _drive(delta: float, omega: float, phi: float, qubit: int) -> Operator:
    phase = np.exp(-1j * phi)
    single = delta * _SIGMA_Z + omega * (phase * SIGMA_PLUS + np.conj(phase) * SIGMA_MINUS)
    return _on_qubit(single, qubit)


def build_flip_flop(coupling: float, i: int = 1, j: int = 2) -> Operator:
    """``J (σ+^i σ-^j + σ-^i σ+^j)``."""
    _check_pair(i, j)
    return coupling * (
        _on_pair(SIGMA_PLUS, SIGMA_MINUS, i, j) + _on_pair(SIGMA_MINUS, SIGMA_PLUS, i, j)
    )


def build_double_excitation(coupling: float, i: int = 1, j: int = 2) -> Operator:
    """``J (σ+^i σ+^j + σ-^i σ-^j)``."""
    _check_pair(i, j)
    _check_finite(coupling=coupling)
    return coupling * (
        _on_pair(SIGMA_PLUS, SIGMA_PLUS, i, j) + _on_pair(SIGMA_MINUS, SIGMA_MINUS, i, j)
    )


def build_h1(p: H1Params) -> Operator:
    return _drive(p.delta, p.omega, p.phi, p.qubit) + build_flip_flop(p.coupling, p.qubit, p.partner)


def single_qubit_rotation_params(axis: str, rate: float, qubit: int = 1) -> H1Params:
    """H1 settings for a rotation about ``x``, ``y`` or ``z`` on one qubit.

    x and y use the drive with ``phi = 0`` or ``π/2`` and ``delta = J = 0``;
    z uses the detuning alone.
    """
    partner = 2 if qubit == 1 else 1
    axis = axis.lower()
    if axis == "x":
        return H1Params(omega=rate, phi=0.0, qubit=qubit, partner=partner)
    if axis == "y":
        return H1Params(omega=rate, phi=math.pi / 2, qubit=qubit, partner=partner)
    if axis == "z":
        return H1Params(delta=rate, qubit=qubit, partner=partner)
    raise ValueError(f"Unknown rotation axis: {axis!r}")


def modulation_ratio(beta: float) -> float:
    """``J1(beta)``, rejecting negative beta and the zeros of J1."""
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    ratio = float(j1(beta))
    if abs(ratio) < J1_ZERO_TOLERANCE:
        raise ValueError(f"J1(beta) vanishes at beta = {beta}")
    return ratio


def effective_j(g: float, beta: float) -> float:
    """Effective transmon coupling ``g·J1(beta)``."""
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    return float(g * j1(beta))


@dataclass(frozen=True)
class TransmonParams:
    """Unmodulated qubit 1 coupled to frequency-modulated qubit 2.

    ``varphi`` is the modulation phase; ``varphi = π`` flips the sign of the
    effective coupling. ``form`` selects which pair of ladder products the
    modulation resonantly picks out.
    """

    g: float
    beta: float = J1_FIRST_MAXIMUM
    varphi: float = 0.0
    delta: float = 0.0
    omega: float = 0.0
    phi: float = 0.0
    form: CouplingForm = CouplingForm.FLIP_FLOP
    drive_qubits: tuple[int, ...] = (1, 2)

    def __post_init__(self) -> None:
        _check_finite(g=self.g, beta=self.beta, varphi=self.varphi,
                      delta=self.delta, omega=self.omega, phi=self.phi)
        if self.g < 0:
            raise ValueError(f"g must be non-negative, got {self.g}")
        if self.form is CouplingForm.PLAIN:
            raise ValueError("Transmon coupling is flip-flop or double-excitation")

    @property
    def coupling(self) -> float:
        return effective_j(self.g, self.beta)


def build_h_trans(p: TransmonParams) -> Operator:
    h = np.zeros((4, 4), dtype=complex)
    if p.delta or p.omega:
        for qubit in p.drive_qubits:
            h = h + _drive(p.delta, p.omega, p.phi, qubit)
    partner = SIGMA_MINUS if p.form is CouplingForm.FLIP_FLOP else SIGMA_PLUS
    raising = np.kron(SIGMA_PLUS, partner) * np.exp(-1j * p.varphi)
    return h + p.coupling * (raising + raising.conj().T)


def transmon_params_for_step(
    sign: int,
    form: CouplingForm,
    coupling: float,
    beta: float = J1_FIRST_MAXIMUM,
) -> TransmonParams:
    """Transmon settings realizing ``sign · J`` with the given coupling form.

    Where J1(beta) is negative the modulation phase absorbs its sign.
    """
    ratio = modulation_ratio(beta)
    signed = sign * coupling
    return TransmonParams(
        g=abs(signed) / abs(ratio),
        beta=beta,
        varphi=0.0 if signed * ratio >= 0 else math.pi,
        form=form,
    )


@dataclass(frozen=True)
class H2Params:
    kind: GateKind
    coupling: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GateKind.parse(self.kind))
        if self.kind is GateKind.FLIP_FLOP:
            raise ValueError("H2 couplings are zz, xx or zx")
        _check_finite(coupling=self.coupling)


_H2_LETTERS = {GateKind.ZZ: ("Z", "Z"), GateKind.XX: ("X", "X"), GateKind.ZX: ("Z", "X")}


def build_h2(p: H2Params) -> Operator:
    """``J' σ_a^1 σ_b^2`` for the pair of letters of ``p.kind``."""
    a, b = _H2_LETTERS[p.kind]
    return p.coupling * to_matrix(pair(a, b))


ERROR_CHANNELS = (
    "x1", "y1", "z1", "x2", "y2", "z2",
    "xx", "yy", "zz", "xy", "yx", "xz", "zx", "yz", "zy",
)


@dataclass(frozen=True)
class ErrorCoefficients:
    """Strengths (rad/s) of the 15 stochastic error channels.

    Single-qubit channels are named ``<axis><qubit>``; two-qubit channels
    ``<axis1><axis2>`` for the letter on qubit 1 then qubit 2.
    """

    x1: float = 0.0
    y1: float = 0.0
    z1: float = 0.0
    x2: float = 0.0
    y2: float = 0.0
    z2: float = 0.0
    xx: float = 0.0
    yy: float = 0.0
    zz: float = 0.0
    xy: float = 0.0
    yx: float = 0.0
    xz: float = 0.0
    zx: float = 0.0
    yz: float = 0.0
    zy: float = 0.0

    def __post_init__(self) -> None:
        _check_finite(**{f.name: getattr(self, f.name) for f in fields(self)})

    @classmethod
    def from_array(cls, values) -> "ErrorCoefficients":
        values = np.asarray(values, dtype=float)
        if values.shape != (len(ERROR_CHANNELS),):
            raise ValueError(f"Expected {len(ERROR_CHANNELS)} coefficients, got shape {values.shape}")
        return cls(*(float(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in ERROR_CHANNELS], dtype=float)

    def __add__(self, other: "ErrorCoefficients") -> "ErrorCoefficients":
        return ErrorCoefficients.from_array(self.as_array() + other.as_array())


_ERROR_BASIS = np.stack([to_matrix(e) for e in error_set()])
_ERROR_BASIS.flags.writeable = False


def error_basis() -> np.ndarray:
    """Read-only ``(15, 4, 4)`` stack of channel operators in ``ERROR_CHANNELS`` order."""
    return _ERROR_BASIS


def build_error_hamiltonian(c: ErrorCoefficients) -> Operator:
    return np.einsum("c,cij->ij", c.as_array(), _ERROR_BASIS)


def coupling_operator(kind: GateKind, form: CouplingForm = CouplingForm.PLAIN) -> Operator:
    """Unit-strength coupling of ``kind`` in ``form``."""
    kind = GateKind.parse(kind)
    if kind is GateKind.FLIP_FLOP:
        if form is CouplingForm.DOUBLE_EXCITATION:
            return build_double_excitation(1.0)
        if form is CouplingForm.FLIP_FLOP:
            return build_flip_flop(1.0)
    elif form is CouplingForm.PLAIN:
        return build_h2(H2Params(kind, 1.0))
    raise ValueError(f"Form {form.value} does not apply to {kind.value} couplings")


def target_form(kind: GateKind) -> CouplingForm:
    kind = GateKind.parse(kind)
    return CouplingForm.FLIP_FLOP if kind is GateKind.FLIP_FLOP else CouplingForm.PLAIN


def target_hamiltonian(kind: GateKind, coupling: float) -> Operator:
    """Coupling Hamiltonian the gate should see at every instant."""
    return coupling * coupling_operator(kind, target_form(kind))


def scheduled_hamiltonian(
    kind: GateKind,
    sign: int,
    form: CouplingForm,
    coupling: float,
    beta: float = J1_FIRST_MAXIMUM,
) -> Operator:
    """Physical coupling set during one interval.

    Flip-flop gates are realized on the transmon (modulation phase for the
    sign, modulation resonance for the form); the others scale ``J'``.
    """
    kind = GateKind.parse(kind)
    if kind is GateKind.FLIP_FLOP:
        return build_h_trans(transmon_params_for_step(sign, form, coupling, beta))
    if form is not CouplingForm.PLAIN:
        raise ValueError(f"Form {form.value} does not apply to {kind.value} couplings")
    return build_h2(H2Params(kind, sign * coupling))


def crosstalk_term(strength: float) -> Operator:
    """Static ``J_ct σ_z^1 σ_z^2``."""
    return strength * to_matrix(pair("Z", "Z"))
