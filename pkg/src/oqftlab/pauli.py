"""
Symplectic Pauli algebra and Pauli channels.

An n-qubit Pauli operator is stored as ``i**phase * P(x_0, z_0) ⊗ ... ⊗ P(x_{n-1}, z_{n-1})``
with

    P(0, 0) = I,  P(1, 0) = X,  P(1, 1) = Y,  P(0, 1) = Z.

Text labels are strings over ``IXYZ`` with the leftmost character acting on
qubit 0, which is also the most significant factor of every Kronecker product
and the most significant base-4 digit of a Pauli *index* (I=0, X=1, Y=2, Z=3).

Channels ignore phases: a Pauli channel is a probability vector over labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterator, Sequence

import numpy as np

from .errors import CapacityError

LETTERS = "IXYZ"
MAX_CHANNEL_QUBITS = 12
PROB_ATOL = 1e-12

_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_LETTER = {v: k for k, v in _XZ.items()}

SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_PHASE_PREFIX = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}


@dataclass(frozen=True)
class PauliString:
    x: tuple[int, ...]
    z: tuple[int, ...]
    phase: int = 0

    def __post_init__(self):
        x = tuple(int(b) for b in self.x)
        z = tuple(int(b) for b in self.z)
        if len(x) != len(z) or len(x) < 1:
            raise ValueError(f"x and z bit vectors must share a length >= 1, got {len(x)} and {len(z)}")
        if any(b not in (0, 1) for b in x + z):
            raise ValueError("x and z entries must be bits")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse ``"XZZXI"``, optionally prefixed by ``+``, ``-``, ``i``, ``+i`` or ``-i``."""
        body = label.lstrip("+-i")
        prefix = label[: len(label) - len(body)]
        if prefix not in _PHASE_PREFIX:
            raise ValueError(f"bad phase prefix in Pauli label {label!r}")
        try:
            bits = [_XZ[c] for c in body]
        except KeyError:
            raise ValueError(f"Pauli label {label!r} has characters outside IXYZ") from None
        if not bits:
            raise ValueError("empty Pauli label")
        return cls(tuple(b[0] for b in bits), tuple(b[1] for b in bits), _PHASE_PREFIX[prefix])

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls((0,) * n, (0,) * n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        labels = ["I"] * n
        labels[qubit] = letter
        return cls.from_label("".join(labels))

    @classmethod
    def from_index(cls, index: int, n: int) -> "PauliString":
        digits = []
        for _ in range(n):
            index, d = divmod(index, 4)
            digits.append(LETTERS[d])
        return cls.from_label("".join(reversed(digits)))

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def label(self) -> str:
        """Phase-free label."""
        return "".join(_LETTER[xz] for xz in zip(self.x, self.z))

    @property
    def index(self) -> int:
        idx = 0
        for c in self.label:
            idx = 4 * idx + LETTERS.index(c)
        return idx

    @property
    def weight(self) -> int:
        return sum(1 for a, b in zip(self.x, self.z) if a or b)

    def without_phase(self) -> "PauliString":
        return PauliString(self.x, self.z, 0)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def __str__(self) -> str:
        return ["+", "+i", "-", "-i"][self.phase] + self.label


def _check_same_size(a: PauliString, b: PauliString):
    if a.n != b.n:
        raise ValueError(f"Pauli size mismatch: {a.n} vs {b.n}")


def _g(x1, z1, x2, z2):
    # exponent of i picked up by P(x1,z1) * P(x2,z2) on one qubit
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Group product ``a · b`` with exact phase tracking."""
    _check_same_size(a, b)
    phase = a.phase + b.phase
    for x1, z1, x2, z2 in zip(a.x, a.z, b.x, b.z):
        phase += _g(x1, z1, x2, z2)
    x = tuple(p ^ q for p, q in zip(a.x, b.x))
    z = tuple(p ^ q for p, q in zip(a.z, b.z))
    return PauliString(x, z, phase % 4)


def symplectic_product(a: PauliString, b: PauliString) -> int:
    _check_same_size(a, b)
    return sum(p * s + q * r for p, q, r, s in zip(a.x, a.z, b.x, b.z)) % 2


def commutes(a: PauliString, b: PauliString) -> bool:
    return symplectic_product(a, b) == 0


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix, phase included."""
    m = reduce(np.kron, [SIGMA[c] for c in p.label])
    return (1j**p.phase) * m


def iter_paulis(n: int) -> Iterator[PauliString]:
    """All 4**n phase-free Paulis in index (= lexicographic label) order."""
    for letters in itertools.product(LETTERS, repeat=n):
        yield PauliString.from_label("".join(letters))


def pauli_digits(n: int) -> np.ndarray:
    """``(4**n, n)`` array of per-qubit letter codes in index order."""
    if n > MAX_CHANNEL_QUBITS:
        raise CapacityError(f"{4**n} Pauli labels for n={n} exceeds the n <= {MAX_CHANNEL_QUBITS} limit")
    idx = np.arange(4**n, dtype=np.int64)
    shifts = 2 * np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 3).astype(np.int8)


def _check_probs(p: np.ndarray, atol: float, what: str):
    if not np.all(np.isfinite(p)):
        raise ValueError(f"{what}: non-finite probability")
    if np.any(p < -atol) or np.any(p > 1 + atol):
        raise ValueError(f"{what}: probabilities must lie in [0, 1], got {p.tolist() if p.size <= 16 else '...'}")
    s = float(p.sum())
    if abs(s - 1.0) > atol:
        raise ValueError(f"{what}: probabilities sum to {s!r}, not 1 (tolerance {atol})")


@dataclass(frozen=True)
class PauliChannel1:
    """Single-qubit Pauli channel ``(p_I, p_X, p_Y, p_Z)``."""

    p: tuple[float, float, float, float]

    def __post_init__(self):
        p = tuple(float(v) for v in self.p)
        if len(p) != 4:
            raise ValueError(f"a single-qubit Pauli channel needs 4 probabilities, got {len(p)}")
        _check_probs(np.array(p), PROB_ATOL, "PauliChannel1")
        # round-off at the edges is clipped, never renormalized
        object.__setattr__(self, "p", tuple(min(1.0, max(0.0, v)) for v in p))

    @classmethod
    def identity(cls) -> "PauliChannel1":
        return cls((1.0, 0.0, 0.0, 0.0))

    @property
    def p_i(self) -> float:
        return self.p[0]

    @property
    def p_x(self) -> float:
        return self.p[1]

    @property
    def p_y(self) -> float:
        return self.p[2]

    @property
    def p_z(self) -> float:
        return self.p[3]

    def as_array(self) -> np.ndarray:
        return np.array(self.p)

    def swap_xz(self) -> "PauliChannel1":
        return PauliChannel1((self.p[0], self.p[3], self.p[2], self.p[1]))


@dataclass(frozen=True, eq=False)
class PauliChannelN:
    """n-qubit Pauli channel stored densely: ``probs[index(E)]``."""

    n: int
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.shape != (4**self.n,):
            raise ValueError(f"expected {4**self.n} probabilities for n={self.n}, got shape {probs.shape}")
        _check_probs(probs, PROB_ATOL * 4**self.n, "PauliChannelN")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def prob(self, label: str | PauliString) -> float:
        p = PauliString.from_label(label) if isinstance(label, str) else label
        if p.n != self.n:
            raise ValueError(f"label acts on {p.n} qubits, channel on {self.n}")
        return float(self.probs[p.index])

    def items(self) -> Iterator[tuple[str, float]]:
        """Nonzero ``(label, probability)`` pairs in index order."""
        for i in np.flatnonzero(self.probs):
            yield PauliString.from_index(int(i), self.n).label, float(self.probs[i])

    def __len__(self):
        return self.probs.size


def biased_channel(p_x: float, p_z: float) -> PauliChannel1:
    """Independent bit-flip (p_x) and phase-flip (p_z) generators; both firing gives Y."""
    _check_unit(p_x, "p_x")
    _check_unit(p_z, "p_z")
    return PauliChannel1(((1 - p_x) * (1 - p_z), p_x * (1 - p_z), p_x * p_z, (1 - p_x) * p_z))


def exclusive_channel(p_x: float, p_z: float) -> PauliChannel1:
    """Mutually exclusive X and Z flips, no Y component."""
    _check_unit(p_x, "p_x")
    _check_unit(p_z, "p_z")
    if p_x + p_z > 1 + PROB_ATOL:
        raise ValueError(f"exclusive noise needs p_x + p_z <= 1, got {p_x + p_z}")
    return PauliChannel1((max(0.0, 1 - p_x - p_z), p_x, 0.0, p_z))


NOISE_MODELS = {"independent": biased_channel, "exclusive": exclusive_channel}


def _check_unit(v, name):
    if not (0.0 <= v <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {v!r}")


def tensor_iid(ch: PauliChannel1, n: int) -> PauliChannelN:
    """Independent copies of ``ch`` on each of ``n`` qubits."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_CHANNEL_QUBITS:
        raise CapacityError(f"n={n} exceeds the dense-enumeration limit of {MAX_CHANNEL_QUBITS} qubits")
    return PauliChannelN(n, iid_probabilities(ch, n))


def iid_probabilities(ch: PauliChannel1, n: int) -> np.ndarray:
    """Raw ``4**n`` probability vector of ``tensor_iid`` without validation."""
    p = ch.as_array()
    return reduce(np.kron, [p] * n)


def apply_pauli_channel(ch: PauliChannelN, rho: np.ndarray) -> np.ndarray:
    """``sum_E p(E) E rho E^dagger``."""
    rho = np.asarray(rho, dtype=complex)
    dim = 2**ch.n
    if rho.shape != (dim, dim):
        raise ValueError(f"density matrix must be {dim}x{dim} for a {ch.n}-qubit channel, got {rho.shape}")
    out = np.zeros_like(rho)
    for i in np.flatnonzero(ch.probs):
        e = pauli_matrix(PauliString.from_index(int(i), ch.n))
        out += ch.probs[i] * (e @ rho @ e.conj().T)
    return out


def pauli_kraus(ch: PauliChannelN | PauliChannel1) -> list[np.ndarray]:
    """Kraus operators ``sqrt(p(E)) E`` of a Pauli channel (zero terms dropped)."""
    if isinstance(ch, PauliChannel1):
        ch = PauliChannelN(1, np.array(ch.p))
    return [
        np.sqrt(ch.probs[i]) * pauli_matrix(PauliString.from_index(int(i), ch.n))
        for i in np.flatnonzero(ch.probs)
    ]


def labels_to_paulis(labels: Sequence[str]) -> list[PauliString]:
    return [PauliString.from_label(s) for s in labels]
