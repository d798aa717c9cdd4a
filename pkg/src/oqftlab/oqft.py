"""
Operator-norm fault-tolerance metrics for single-qubit logical Pauli channels.

For a storage task (ideal operation = identity) the implementation inaccuracy
of a Pauli channel is ``||P(rho) - rho||_1``. On Bloch vectors the difference
map is diagonal, scaling axis ``k`` by ``lambda_k - 1 = -2 (eps - eps_k)``, and
the trace distance between two qubit states is the Euclidean distance of
their Bloch vectors. Its supremum over states is therefore
``2 * max_k (eps - eps_k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .codes import StabilizerCode
from .effective import concatenate, epsilon_eta
from .errors import BracketError
from .pauli import NOISE_MODELS, SIGMA, PauliChannel1

RATIO_KINDS = ("P", "QFT")


def sup_inaccuracy(ch: PauliChannel1) -> float:
    """Closed-form ``sup_rho ||P(rho) - rho||_1``."""
    _, px, py, pz = ch.p
    return 2.0 * max(py + pz, px + pz, px + py)


def eta_norm_sup(eta) -> float:
    """``sup_rho ||sum_k eta_k sigma_k rho sigma_k - rho||_1`` for a probability 3-vector."""
    return 2.0 * (1.0 - min(eta))


def bloch_grid(resolution: int) -> np.ndarray:
    """``resolution**2`` unit vectors on a (theta, phi) product grid, axes included for even resolution."""
    theta = np.pi * np.arange(resolution) / resolution
    phi = 2 * np.pi * np.arange(resolution) / resolution
    t, f = np.meshgrid(theta, phi, indexing="ij")
    return np.stack([np.sin(t) * np.cos(f), np.sin(t) * np.sin(f), np.cos(t)], axis=-1).reshape(-1, 3)


def _grid_values(ch: PauliChannel1, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    if resolution < 16:
        raise ValueError(f"resolution must be >= 16, got {resolution}")
    r = bloch_grid(resolution)
    # the channel is linear: apply it once to each Pauli basis matrix and
    # combine with the Bloch coordinates of every grid state
    delta = []
    for b in (SIGMA[k] for k in "IXYZ"):
        image = sum(p * (SIGMA[s] @ b @ SIGMA[s].conj().T) for p, s in zip(ch.p, "IXYZ"))
        delta.append(0.5 * (image - b))
    diff = delta[0][None] + np.tensordot(r, np.array(delta[1:]), axes=(1, 0))
    # diff is traceless Hermitian [[a, b], [b*, -a]] with eigenvalues +-sqrt(a^2 + |b|^2)
    vals = 2.0 * np.hypot(diff[:, 0, 0].real, np.abs(diff[:, 0, 1]))
    return r, vals


def sup_inaccuracy_grid(ch: PauliChannel1, resolution: int) -> float:
    """Brute-force supremum over a Bloch-sphere grid of pure states (a lower bound)."""
    _, vals = _grid_values(ch, resolution)
    return float(vals.max())


def grid_maximizers(ch: PauliChannel1, resolution: int, atol: float = 1e-12) -> np.ndarray:
    """Bloch vectors of the grid states attaining the grid maximum within ``atol``."""
    r, vals = _grid_values(ch, resolution)
    return r[vals >= vals.max() - atol]


@dataclass(frozen=True)
class RatioReport:
    """Ratios between two consecutive concatenation levels; None marks an undefined value."""

    epsilon_i: float
    epsilon_i1: float
    sup_i: float
    sup_i1: float
    p_ratio: float | None
    q_ratio: float | None
    qft_ratio: float | None
    level_pair: tuple[int, int] = (1, 2)
    p_x: float | None = None
    p_z: float | None = None

    def ratio(self, kind: str) -> float | None:
        if kind == "P":
            return self.p_ratio
        if kind == "QFT":
            return self.qft_ratio
        if kind == "Q":
            return self.q_ratio
        raise ValueError(f"unknown ratio kind {kind!r}")


def ratios(
    level_i: PauliChannel1,
    level_i1: PauliChannel1,
    *,
    level_pair: tuple[int, int] = (1, 2),
    p_x: float | None = None,
    p_z: float | None = None,
) -> RatioReport:
    """P-, Q- and QFT-ratios comparing level ``i+1`` with level ``i``.

    The Q-ratio is computed from the two eta vectors alone, so the identity
    ``p_ratio == qft_ratio * q_ratio`` is a genuine check, not a definition.
    """
    a, b = epsilon_eta(level_i), epsilon_eta(level_i1)
    sup_a, sup_b = sup_inaccuracy(level_i), sup_inaccuracy(level_i1)
    if not a.defined:
        p_ratio = q_ratio = qft_ratio = None
    else:
        qft_ratio = b.epsilon / a.epsilon
        p_ratio = sup_b / sup_a
        q_ratio = eta_norm_sup(b.eta) / eta_norm_sup(a.eta) if b.defined else None
    return RatioReport(
        epsilon_i=a.epsilon,
        epsilon_i1=b.epsilon,
        sup_i=sup_a,
        sup_i1=sup_b,
        p_ratio=p_ratio,
        q_ratio=q_ratio,
        qft_ratio=qft_ratio,
        level_pair=tuple(level_pair),
        p_x=p_x,
        p_z=p_z,
    )


def ratio_at(
    code: StabilizerCode,
    p_x: float,
    p_z: float,
    *,
    noise: str = "independent",
    level_pair: tuple[int, int] = (1, 2),
) -> RatioReport:
    """Ratios for physical noise ``(p_x, p_z)`` between the given concatenation levels."""
    lo, hi = level_pair
    if not (0 <= lo and hi == lo + 1):
        raise ValueError(f"level pair must be (i, i+1) with i >= 0, got {level_pair}")
    physical = NOISE_MODELS[noise](p_x, p_z)
    levels = concatenate(code, physical, hi)
    return ratios(levels[lo], levels[hi], level_pair=(lo, hi), p_x=p_x, p_z=p_z)


def find_threshold(
    code: StabilizerCode,
    p_z: float,
    ratio_kind: str = "QFT",
    bracket: tuple[float, float] = (1e-4, 0.2),
    tol: float = 1e-6,
    *,
    noise: str = "independent",
    level_pair: tuple[int, int] = (1, 2),
) -> float:
    """Bisect on ``p_x`` for the point where the chosen ratio crosses 1."""
    if ratio_kind not in RATIO_KINDS:
        raise ValueError(f"ratio_kind must be one of {RATIO_KINDS}, got {ratio_kind!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise BracketError(f"empty bracket [{lo}, {hi}]", lo, hi)

    def f(px: float) -> float | None:
        r = ratio_at(code, px, p_z, noise=noise, level_pair=level_pair).ratio(ratio_kind)
        return None if r is None else r - 1.0

    f_lo, f_hi = f(lo), f(hi)
    if f_lo is None or f_hi is None or f_lo * f_hi > 0:
        raise BracketError(
            f"{ratio_kind}-ratio - 1 does not change sign over [{lo}, {hi}]: "
            f"f(lo)={_fmt(f_lo)}, f(hi)={_fmt(f_hi)}",
            lo, hi, f_lo, f_hi,
        )
    return bisect(f, lo, hi, f_lo, tol)


def bisect(f: Callable[[float], float | None], lo: float, hi: float, f_lo: float, tol: float) -> float:
    if f_lo == 0.0:
        return lo
    while hi - lo > 2 * tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid is None:
            raise BracketError(f"ratio undefined at p_x={mid}", lo, hi)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _fmt(v):
    return "undefined" if v is None or (isinstance(v, float) and math.isnan(v)) else f"{v:.6g}"
