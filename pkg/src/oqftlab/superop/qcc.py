"""Implementation inaccuracy ``||P(rho) - U rho U^dag||_1`` and supremum estimation over pure states."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import minimize

from ..errors import CapacityError
from .channels import STATE_ATOL, KrausChannel, compose, trace_norm

GRID_MAX_DIM = 8
RESTART_MAX_DIM = 64
HOLD_SLACK = 1e-9


@dataclass(frozen=True)
class LinkingMap:
    """Noiseless identification between logical and computational spaces.

    ``isometry`` is always the ``comp_dim x logical_dim`` embedding ``V``;
    ``direction`` selects ``rho -> V rho V^dag`` ("l2c") or ``rho -> V^dag rho V`` ("c2l").
    """

    direction: str
    isometry: np.ndarray

    def __post_init__(self):
        if self.direction not in ("l2c", "c2l"):
            raise ValueError(f"direction must be 'l2c' or 'c2l', got {self.direction!r}")
        v = np.asarray(self.isometry, dtype=complex)
        if not np.allclose(v.conj().T @ v, np.eye(v.shape[1]), atol=STATE_ATOL, rtol=0):
            raise ValueError("linking map is not an isometry on the logical space")
        object.__setattr__(self, "isometry", v)

    def as_channel(self) -> KrausChannel:
        v = self.isometry
        if self.direction == "l2c":
            return KrausChannel((v,), True, "M_l2c")
        # V^dag alone only preserves trace on the image of V
        return KrausChannel((v.conj().T,), False, "M_c2l")


def subsume_links(p: KrausChannel, l2c: LinkingMap, c2l: LinkingMap) -> KrausChannel:
    """``M_c2l ∘ P ∘ M_l2c``: the implemented map seen on the logical space."""
    return compose([l2c.as_channel(), p, c2l.as_channel()], name="P_tilde")


def _check_dims(p_tilde: KrausChannel, u: np.ndarray):
    u = np.asarray(u, dtype=complex)
    d = p_tilde.in_dim
    if p_tilde.out_dim != d or u.shape != (d, d):
        raise ValueError(
            f"implemented map is {p_tilde.out_dim}x{p_tilde.in_dim} on states but ideal operation has shape {u.shape}"
        )
    return u


def qcc_inaccuracy(p_tilde: KrausChannel, u: np.ndarray, rho: np.ndarray) -> float:
    u = _check_dims(p_tilde, u)
    rho = np.asarray(rho, dtype=complex)
    return trace_norm(p_tilde.apply(rho) - u @ rho @ u.conj().T)


@dataclass(frozen=True)
class QccResult:
    """Outcome of a QCC check. ``witness_sup`` is a lower bound on the true supremum."""

    holds: bool
    witness_sup: float
    witness_state: np.ndarray
    alpha: float
    strategy: str
    n_evaluated: int
    lower_bound: bool = True


def pure_state_grid(dim: int, resolution: int) -> np.ndarray:
    """Deterministic pure states: a (theta, phi) grid on the Bloch sphere of every coordinate pair.

    For ``dim == 2`` this is the full ``resolution**2`` Bloch grid.
    """
    theta = np.pi * np.arange(resolution) / resolution
    phi = 2 * np.pi * np.arange(resolution) / resolution
    t, f = (a.ravel() for a in np.meshgrid(theta, phi, indexing="ij"))
    a0 = np.cos(t / 2)
    a1 = np.exp(1j * f) * np.sin(t / 2)
    blocks = []
    for i, j in combinations(range(dim), 2):
        v = np.zeros((t.size, dim), dtype=complex)
        v[:, i] = a0
        v[:, j] = a1
        blocks.append(v)
    return np.concatenate(blocks)


def _batched_inaccuracy(p_tilde: KrausChannel, u: np.ndarray, states: np.ndarray) -> np.ndarray:
    d = p_tilde.in_dim
    rho = states[:, :, None] * states.conj()[:, None, :]
    s = p_tilde.superop()
    out = (rho.reshape(len(states), d * d) @ s.T).reshape(-1, d, d)
    ideal = u @ rho @ u.conj().T
    return np.abs(np.linalg.eigvalsh(out - ideal)).sum(axis=1)


def qcc_check(
    p_tilde: KrausChannel,
    u: np.ndarray,
    alpha: float,
    strategy: str = "grid",
    *,
    resolution: int | None = None,
    restarts: int = 8,
    rng: np.random.Generator | None = None,
) -> QccResult:
    """Estimate ``sup_rho ||P(rho) - U rho U^dag||_1`` over pure states and compare with ``alpha``.

    Pure states suffice because the objective is convex in ``rho``. Both
    strategies only see finitely many states, so the witness is a lower
    bound and ``holds`` is a necessary-condition test. ``random_restarts``
    needs a seeded ``rng`` for reproducibility.
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    u = _check_dims(p_tilde, u)
    d = p_tilde.in_dim
    if strategy == "grid":
        if d > GRID_MAX_DIM:
            raise CapacityError(f"grid strategy supports logical dimension <= {GRID_MAX_DIM}, got {d}")
        if resolution is None:
            resolution = 64 if d == 2 else 16
        states = pure_state_grid(d, resolution)
        vals = _batched_inaccuracy(p_tilde, u, states)
        best = int(np.argmax(vals))
        sup, witness, count = float(vals[best]), states[best], len(states)
    elif strategy == "random_restarts":
        if d > RESTART_MAX_DIM:
            raise CapacityError(f"random restarts support logical dimension <= {RESTART_MAX_DIM}, got {d}")
        if rng is None:
            raise ValueError("random_restarts needs an explicit seeded rng")
        sup, witness, count = _random_restarts(p_tilde, u, restarts, rng)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return QccResult(sup <= alpha + HOLD_SLACK, sup, witness, alpha, strategy, count)


def _random_restarts(p_tilde, u, restarts, rng):
    d = p_tilde.in_dim
    count = 0

    def unpack(params):
        v = params[:d] + 1j * params[d:]
        return v / np.linalg.norm(v)

    def objective(params):
        nonlocal count
        count += 1
        v = unpack(params)
        return -qcc_inaccuracy(p_tilde, u, np.outer(v, v.conj()))

    best_val, best_state = -1.0, None
    for _ in range(restarts):
        x0 = rng.normal(size=2 * d)
        res = minimize(objective, x0, method="L-BFGS-B", options={"maxiter": 60})
        for x in (x0, res.x):
            val = -objective(x)
            if val > best_val:
                best_val, best_state = val, unpack(x)
    return best_val, best_state, count
