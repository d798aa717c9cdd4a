"""Checks that compare the fast Pauli engine with dense superoperator routes."""

from __future__ import annotations

import numpy as np

from ..codes import StabilizerCode
from ..effective import effective_channel
from ..oqft import sup_inaccuracy
from ..pauli import SIGMA, PauliChannel1, apply_pauli_channel, pauli_kraus, tensor_iid
from .channels import KrausChannel, random_density_matrix
from .instances import CheckResult, decoder_channels, encoder, recovery_channel
from .qcc import qcc_check

CHANNEL_ATOL = 1e-12
SUP_ATOL = 1e-3
SUP_RESOLUTION = 200


def pauli_probabilities(ch: KrausChannel) -> np.ndarray:
    """``(p_I, p_X, p_Y, p_Z)`` of a qubit channel, read off its Choi matrix.

    For a Pauli channel ``p_k = <<s_k| J |s_k>> / 4`` where ``|s>>`` is the
    vectorization matching ``KrausChannel.choi``.
    """
    if ch.in_dim != 2 or ch.out_dim != 2:
        raise ValueError("Pauli probabilities need a qubit channel")
    return _choi_weights(ch.choi())


def _choi_weights(j: np.ndarray) -> np.ndarray:
    vecs = [SIGMA[s].T.reshape(-1) for s in "IXYZ"]
    return np.array([(v.conj() @ j @ v).real / 4 for v in vecs])


def dense_effective_channel(code: StabilizerCode, per_qubit: PauliChannel1) -> np.ndarray:
    """Effective logical channel from dense matrices: enc, i.i.d. Pauli noise, recovery, dec."""
    noise = KrausChannel(tuple(pauli_kraus(tensor_iid(per_qubit, code.n))), True, "noise")
    dec, _ = decoder_channels(code)
    stages = [encoder(code), noise, recovery_channel(code), dec]
    j = np.zeros((4, 4), dtype=complex)
    for a in range(2):
        for b in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[a, b] = 1
            for st in stages:
                e = st.apply(e)
            j[2 * a : 2 * a + 2, 2 * b : 2 * b + 2] = e
    return _choi_weights(j)


def random_pauli_channel(rng: np.random.Generator, max_error: float = 0.5) -> PauliChannel1:
    err = rng.dirichlet(np.ones(3)) * rng.uniform(0, max_error)
    return PauliChannel1((1 - err.sum(), *err))


def check_effective_channel(code: StabilizerCode, per_qubit: PauliChannel1) -> CheckResult:
    fast = effective_channel(code, per_qubit).as_array()
    dense = dense_effective_channel(code, per_qubit)
    gap = float(np.abs(fast - dense).max())
    return CheckResult(
        f"effective channel: enumeration vs dense pipeline ({code.name})",
        gap <= CHANNEL_ATOL,
        f"max gap {gap:.2e} at per-qubit channel {tuple(round(float(x), 6) for x in per_qubit.p)}",
        gap,
    )


def check_sup_inaccuracy(n_channels: int = 20, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst, above = 0.0, False
    for _ in range(n_channels):
        ch = random_pauli_channel(rng)
        p_tilde = KrausChannel(tuple(pauli_kraus(ch)), True, "pauli")
        res = qcc_check(p_tilde, np.eye(2), 0.0, "grid", resolution=SUP_RESOLUTION)
        closed = sup_inaccuracy(ch)
        worst = max(worst, abs(closed - res.witness_sup))
        above |= res.witness_sup > closed + CHANNEL_ATOL
    ok = worst <= SUP_ATOL and not above
    return CheckResult(
        "sup inaccuracy: closed form vs QCC grid search",
        ok,
        f"{n_channels} random channels, resolution {SUP_RESOLUTION}, max gap {worst:.2e}"
        + ("; grid exceeded closed form" if above else ""),
        worst,
    )


def check_pauli_application(n_qubits: int = 2, n_states: int = 10, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    ch = tensor_iid(random_pauli_channel(rng), n_qubits)
    kraus = KrausChannel(tuple(pauli_kraus(ch)), True, "pauli")
    worst = 0.0
    for _ in range(n_states):
        rho = random_density_matrix(2**n_qubits, rng)
        worst = max(worst, float(np.abs(apply_pauli_channel(ch, rho) - kraus.apply(rho)).max()))
    return CheckResult(
        "Pauli channel: probability table vs Kraus form",
        worst <= CHANNEL_ATOL,
        f"{n_qubits} qubits, {n_states} random states, max gap {worst:.2e}",
        worst,
    )


def cross_engine_suite(codes, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = [check_effective_channel(code, random_pauli_channel(rng, 0.3)) for code in codes]
    results.append(check_sup_inaccuracy(seed=seed))
    results.append(check_pauli_application(seed=seed))
    return results
