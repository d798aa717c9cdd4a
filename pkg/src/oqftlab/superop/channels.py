"""Dense Kraus-form channels, partial trace and the trace norm."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

TP_ATOL = 1e-10
STATE_ATOL = 1e-12
NULL_KRAUS = 1e-14


def trace_norm(m: np.ndarray) -> float:
    """Schatten-1 norm: the sum of singular values."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"trace_norm needs a square matrix, got shape {m.shape}")
    return float(np.linalg.svd(m, compute_uv=False).sum())


def check_density_matrix(rho: np.ndarray, atol: float = STATE_ATOL) -> np.ndarray:
    """Return ``rho`` as a complex array after checking Hermiticity, unit trace and positivity."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=atol, rtol=0):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise ValueError(f"density matrix has trace {np.trace(rho).real:.3g}")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random state vector."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-ensemble mixed state (Hilbert-Schmidt measure when rank == dim)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def partial_trace_B(rho: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Trace out the second tensor factor of ``rho`` on ``A ⊗ B``."""
    d_a, d_b = dims
    rho = np.asarray(rho)
    if rho.shape != (d_a * d_b, d_a * d_b):
        raise ValueError(f"rho of shape {rho.shape} does not factor as {d_a} x {d_b}")
    return np.einsum("ajbj->ab", rho.reshape(d_a, d_b, d_a, d_b))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Channel ``rho -> sum_j K_j rho K_j^dagger`` with ``out_dim x in_dim`` operators.

    ``trace_preserving=False`` marks a trace-non-increasing map such as a
    projection; otherwise ``sum_j K_j^dagger K_j = I`` is enforced.
    """

    ops: tuple[np.ndarray, ...]
    trace_preserving: bool = True
    name: str = ""

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise ValueError(f"Kraus operators must share one 2-D shape, got {[k.shape for k in ops]}")
        object.__setattr__(self, "ops", ops)
        gram = self.gram()
        eye = np.eye(shape[1])
        if self.trace_preserving:
            if not np.allclose(gram, eye, atol=TP_ATOL, rtol=0):
                dev = np.abs(gram - eye).max()
                raise ValueError(f"channel {self.name!r} is not trace preserving (max deviation {dev:.3g})")
        elif np.linalg.eigvalsh(eye - gram).min() < -TP_ATOL:
            raise ValueError(f"channel {self.name!r} increases trace")

    @property
    def in_dim(self) -> int:
        return self.ops[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.ops[0].shape[0]

    def gram(self) -> np.ndarray:
        return sum(k.conj().T @ k for k in self.ops)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho)
        if rho.shape != (self.in_dim, self.in_dim):
            raise ValueError(f"channel {self.name!r} expects {self.in_dim}x{self.in_dim} input, got {rho.shape}")
        return sum(k @ rho @ k.conj().T for k in self.ops)

    __call__ = apply

    def superop(self) -> np.ndarray:
        """Row-major Liouville matrix: ``vec(K rho K^dag) = (K ⊗ conj(K)) vec(rho)``."""
        return sum(np.kron(k, k.conj()) for k in self.ops)

    def choi(self) -> np.ndarray:
        """Unnormalized Choi matrix ``sum_ij |i><j| ⊗ E(|i><j|)``."""
        d = self.in_dim
        out = np.zeros((d * self.out_dim, d * self.out_dim), dtype=complex)
        for i in range(d):
            for j in range(d):
                e = np.zeros((d, d), dtype=complex)
                e[i, j] = 1
                out[i * self.out_dim : (i + 1) * self.out_dim, j * self.out_dim : (j + 1) * self.out_dim] = self.apply(e)
        return out

    def trace_deficit(self, rho: np.ndarray) -> float:
        """Weight discarded by a trace-non-increasing stage."""
        return float(1 - np.trace(self.apply(rho)).real)

    def with_name(self, name: str) -> "KrausChannel":
        return KrausChannel(self.ops, self.trace_preserving, name)

    @classmethod
    def identity(cls, dim: int, name: str = "identity") -> "KrausChannel":
        return cls((np.eye(dim),), True, name)

    @classmethod
    def unitary(cls, u: np.ndarray, name: str = "unitary") -> "KrausChannel":
        return cls((np.asarray(u),), True, name)

    @classmethod
    def mixture(cls, probs: Sequence[float], unitaries: Sequence[np.ndarray], name: str = "mixture") -> "KrausChannel":
        """Random-unitary channel; zero-probability terms are dropped."""
        return cls(tuple(np.sqrt(p) * np.asarray(u) for p, u in zip(probs, unitaries) if p > 0), True, name)


def compose(channels: Sequence[KrausChannel], drop_tol: float = NULL_KRAUS, name: str = "") -> KrausChannel:
    """Channel applying ``channels`` in the order given (first element acts first).

    Kraus products with Frobenius norm below ``drop_tol`` are discarded.
    """
    if not channels:
        raise ValueError("compose needs at least one channel")
    ops = list(channels[0].ops)
    tp = channels[0].trace_preserving
    for prev, ch in zip(channels, channels[1:]):
        if ch.in_dim != prev.out_dim:
            raise ValueError(
                f"cannot compose {prev.name or 'channel'} (out {prev.out_dim}) "
                f"with {ch.name or 'channel'} (in {ch.in_dim})"
            )
        ops = [k2 @ k1 for k1 in ops for k2 in ch.ops]
        ops = [k for k in ops if np.linalg.norm(k) >= drop_tol] or [np.zeros((ch.out_dim, channels[0].in_dim))]
        tp = tp and ch.trace_preserving
    return KrausChannel(tuple(ops), tp, name)


def canonical_kraus(ch: KrausChannel, atol: float = 1e-12) -> KrausChannel:
    """Equivalent channel with at most ``in_dim * out_dim`` orthogonal Kraus operators (from the Choi matrix)."""
    d_in, d_out = ch.in_dim, ch.out_dim
    w, v = np.linalg.eigh(ch.choi())
    ops = []
    for val, vec in zip(w[::-1], v.T[::-1]):
        if val <= atol:
            break
        # Choi column index is i * d_out + a  ->  K[a, i]
        ops.append(np.sqrt(val) * vec.reshape(d_in, d_out).T)
    if not ops:
        ops = [np.zeros((d_out, d_in))]
    return KrausChannel(tuple(ops), ch.trace_preserving, ch.name)


def partial_trace_channel(d_a: int, d_b: int) -> KrausChannel:
    """``Tr_B`` on ``A ⊗ B`` as a channel with Kraus operators ``I_A ⊗ <j|``."""
    eye = np.eye(d_a)
    return KrausChannel(tuple(np.kron(eye, np.eye(d_b)[j : j + 1]) for j in range(d_b)), True, "partial_trace_B")


def isometry_channel(v: np.ndarray, name: str = "isometry") -> KrausChannel:
    v = np.asarray(v, dtype=complex)
    if not np.allclose(v.conj().T @ v, np.eye(v.shape[1]), atol=STATE_ATOL, rtol=0):
        raise ValueError(f"{name}: matrix is not an isometry")
    return KrausChannel((v,), True, name)


def lift(ch: KrausChannel, left: int = 1, right: int = 1, name: str = "") -> KrausChannel:
    """``I_left ⊗ ch ⊗ I_right``."""
    ops = tuple(np.kron(np.kron(np.eye(left), k), np.eye(right)) for k in ch.ops)
    return KrausChannel(ops, ch.trace_preserving, name or ch.name)


def direct_sum_identity(ch: KrausChannel, dim_k: int, name: str = "") -> KrausChannel:
    """``ch ⊕ id_K``: acts as ``ch`` on the first block and leaves a ``dim_k`` block alone.

    A single-operator channel becomes ``U ⊕ I_K``. Otherwise the operators are
    ``K_j ⊕ 0`` plus ``0 ⊕ I_K``, which drops coherence between the blocks;
    irrelevant for inputs supported on one block.
    """
    if dim_k == 0:
        return ch.with_name(name or ch.name)
    if ch.in_dim != ch.out_dim:
        raise ValueError("direct sum with the identity needs a square channel")
    d = ch.in_dim
    if len(ch.ops) == 1:
        m = np.eye(d + dim_k, dtype=complex)
        m[:d, :d] = ch.ops[0]
        return KrausChannel((m,), ch.trace_preserving, name or ch.name)
    ops = []
    for k in ch.ops:
        m = np.zeros((d + dim_k, d + dim_k), dtype=complex)
        m[:d, :d] = k
        ops.append(m)
    tail = np.zeros((d + dim_k, d + dim_k), dtype=complex)
    tail[d:, d:] = np.eye(dim_k)
    ops.append(tail)
    return KrausChannel(tuple(ops), ch.trace_preserving, name or ch.name)
