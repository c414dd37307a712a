"""Signed multi-qubit Pauli strings with exact phase tracking.

A ``PauliString`` is a tensor product of single-qubit letters from
``I, X, Y, Z`` times a phase in ``{+1, +i, -1, -i}``. The phase is stored as an
integer exponent of ``i`` (mod 4) and is never turned into a float, so long
chains of pulse products keep exact signs.

Qubits are numbered from 1 in every public function, matching the usual
"qubit 1 / qubit 2" labelling; qubit 1 is the leftmost Kronecker factor.

Example:
    >>> a = PauliString.parse("XI")
    >>> b = PauliString.parse("YI")
    >>> str(a * b)
    '+iZI'
    >>> str(conjugate(PauliString.parse("XX"), PauliString.parse("ZX")))
    '-ZX'
"""

import re
from dataclasses import dataclass
from functools import reduce
from typing import Union

import numpy as np

from .exceptions import DimensionError

Operator = np.ndarray

LETTERS = "IXYZ"

_PAULI_2X2 = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (a, b) -> (exponent of i, letter) for the single-qubit product a·b
_PRODUCT_TABLE: dict[tuple[str, str], tuple[int, str]] = {}
for _p in LETTERS:
    _PRODUCT_TABLE["I", _p] = (0, _p)
    _PRODUCT_TABLE[_p, "I"] = (0, _p)
    _PRODUCT_TABLE[_p, _p] = (0, "I")
_PRODUCT_TABLE.update({
    ("X", "Y"): (1, "Z"), ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"), ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"), ("X", "Z"): (3, "Y"),
})

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PHASE_VALUE = {0: 1, 1: 1j, 2: -1, 3: -1j}
_PREFIX_PHASE = {"": 0, "+": 0, "+i": 1, "-": 2, "-i": 3}
_TEXT_RE = re.compile(r"^\s*([+-]i?)?([IXYZ]+)\s*$")
_MATRIX_QUBITS = (1, 2)
_TWO_QUBIT_CHANNELS = ("XX", "YY", "ZZ", "XY", "YX", "XZ", "ZX", "YZ", "ZY")


@dataclass(frozen=True)
class PauliString:
    """Immutable signed Pauli string.

    Attributes:
        letters: One letter from ``IXYZ`` per qubit, qubit 1 first.
        phase: Exponent ``k`` of the global phase ``i**k``, kept in ``0..3``.
    """

    letters: str
    phase: int = 0

    def __post_init__(self) -> None:
        if not self.letters:
            raise DimensionError("Pauli string needs at least one qubit")
        bad = set(self.letters) - set(LETTERS)
        if bad:
            raise ValueError(f"Invalid Pauli letters {sorted(bad)} in {self.letters!r}")
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        """Number of non-identity letters."""
        return sum(1 for c in self.letters if c != "I")

    @property
    def sign(self) -> int:
        """Real sign of the phase; only defined for phases ±1."""
        if self.phase % 2:
            raise ValueError(f"{self} has an imaginary phase")
        return 1 if self.phase == 0 else -1

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def is_identity(self) -> bool:
        return self.weight == 0

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls("I" * n_qubits)

    @classmethod
    def single(cls, letter: str, qubit: int, n_qubits: int = 2) -> "PauliString":
        """Letter on one qubit (1-based), identity elsewhere."""
        return cls.from_map({qubit: letter}, n_qubits)

    @classmethod
    def from_map(cls, letters: dict[int, str], n_qubits: int = 2, phase: int = 0) -> "PauliString":
        """Build from ``{qubit: letter}`` with 1-based qubit indices."""
        chars = ["I"] * n_qubits
        for qubit, letter in letters.items():
            if not 1 <= qubit <= n_qubits:
                raise DimensionError(f"Qubit {qubit} outside 1..{n_qubits}")
            chars[qubit - 1] = letter
        return cls("".join(chars), phase)

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        """Parse ``"±[IXYZ]{n}"``; a missing sign means ``+``; ``+i``/``-i`` prefixes allowed."""
        match = _TEXT_RE.match(text)
        if not match:
            raise ValueError(f"Cannot parse Pauli string {text!r}")
        return cls(match.group(2), _PREFIX_PHASE[match.group(1) or ""])

    def without_phase(self) -> "PauliString":
        return PauliString(self.letters) if self.phase else self

    def letter(self, qubit: int) -> str:
        return self.letters[qubit - 1]

    def commutes_with(self, other: "PauliString") -> bool:
        _check_same_size(self, other)
        return _anticommuting_sites(self.letters, other.letters) % 2 == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString(self.letters, self.phase + 2)

    def __str__(self) -> str:
        return f"{_PHASE_PREFIX[self.phase]}{self.letters}"


PauliLike = Union[PauliString, str]


def as_pauli(value: PauliLike) -> PauliString:
    return value if isinstance(value, PauliString) else PauliString.parse(value)


def _check_same_size(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(
            f"Qubit-count mismatch: {a} has {a.n_qubits}, {b} has {b.n_qubits}"
        )


def _anticommuting_sites(a: str, b: str) -> int:
    return sum(1 for p, q in zip(a, b) if p != "I" and q != "I" and p != q)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Group product ``a·b`` with exact phase."""
    _check_same_size(a, b)
    phase = a.phase + b.phase
    letters = []
    for p, q in zip(a.letters, b.letters):
        k, r = _PRODUCT_TABLE[p, q]
        phase += k
        letters.append(r)
    return PauliString("".join(letters), phase)


def product(paulis: "list[PauliString]", n_qubits: int) -> PauliString:
    """Time-ordered product: later entries multiply on the left."""
    return reduce(lambda acc, p: multiply(p, acc), paulis, PauliString.identity(n_qubits))


def conjugate(pulse: PauliString, error: PauliString) -> PauliString:
    """Return ``pulse · error · pulse`` for a phase-free pulse.

    The result carries the letters of ``error`` with its sign flipped once per
    site where the two strings anticommute.
    """
    _check_same_size(pulse, error)
    if pulse.phase != 0:
        raise ValueError(f"Conjugating pulse must have phase +1, got {pulse}")
    flips = _anticommuting_sites(pulse.letters, error.letters) % 2
    return PauliString(error.letters, error.phase + 2 * flips)


def to_matrix(p: PauliString) -> Operator:
    """Dense ``2**n x 2**n`` matrix of ``p`` for one or two qubits."""
    if p.n_qubits not in _MATRIX_QUBITS:
        raise DimensionError(f"Matrix form supports 1 or 2 qubits, got {p.n_qubits}")
    mat = reduce(np.kron, (_PAULI_2X2[c] for c in p.letters))
    return _PHASE_VALUE[p.phase] * mat


def pair(a: str, b: str, i: int = 1, j: int = 2, n_qubits: int = 2) -> PauliString:
    """Letter ``a`` on qubit ``i`` and ``b`` on qubit ``j``."""
    if i == j:
        raise DimensionError(f"Qubits must differ, got i = j = {i}")
    return PauliString.from_map({i: a, j: b}, n_qubits)


def error_set(i: int = 1, j: int = 2, n_qubits: int = 2) -> tuple[PauliString, ...]:
    """The 15 single- and two-qubit error operators on qubits ``i`` and ``j``.

    Ordered as the channels of the stochastic error Hamiltonian: single-qubit
    ``x, y, z`` on ``i`` then ``j``, followed by ``xx, yy, zz, xy, yx, xz, zx,
    yz, zy``.
    """
    singles = [pair(c, "I", i, j, n_qubits) for c in "XYZ"]
    singles += [pair("I", c, i, j, n_qubits) for c in "XYZ"]
    doubles = [pair(a, b, i, j, n_qubits) for a, b in _TWO_QUBIT_CHANNELS]
    return tuple(singles + doubles)


def e2_subset(i: int = 1, j: int = 2, n_qubits: int = 2) -> tuple[PauliString, ...]:
    """Errors left untouched by σ_x pulses: ``X_i, X_j, X_i X_j``."""
    return (
        pair("X", "I", i, j, n_qubits),
        pair("I", "X", i, j, n_qubits),
        pair("X", "X", i, j, n_qubits),
    )


def e1_subset(i: int = 1, j: int = 2, n_qubits: int = 2) -> tuple[PauliString, ...]:
    """Errors the σ_x sequence removes: everything in the set but ``e2_subset``."""
    skip = set(e2_subset(i, j, n_qubits))
    return tuple(e for e in error_set(i, j, n_qubits) if e not in skip)


def is_hermitian(op: Operator, atol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(op - op.conj().T), initial=0.0) < atol)


def unitarity_defect(u: Operator) -> float:
    """``max |U†U - I|``."""
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def max_norm(op: Operator) -> float:
    return float(np.max(np.abs(op), initial=0.0))
