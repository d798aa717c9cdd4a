"""
Bundled correctable instances for each error-correction family, and the
reduction suite that checks every arrow of the hierarchy

    QCC -> EAOQEC -> {EAQEC, OQEC} -> QEC
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.linalg import null_space

from ..codes import StabilizerCode, bit_flip_3
from ..pauli import PauliString, pauli_matrix
from .channels import KrausChannel, direct_sum_identity, lift, random_density_matrix, trace_norm
from .eaoqec import EaoqecSpec, eaoqec_pipeline, eaoqec_stages, stage_agreement, trajectory
from .qcc import qcc_check

IDENTITY_ATOL = 1e-10
STAGE_ATOL = 1e-12
N_RANDOM_STATES = 100


def _kron(*ms):
    return reduce(np.kron, ms)


# --- channels derived from a stabilizer code -------------------------------


def logical_basis(code: StabilizerCode) -> tuple[np.ndarray, np.ndarray]:
    """``|0_L>`` (+1 eigenstate of every generator and of logical Z) and ``|1_L> = Xbar |0_L>``."""
    dim = 2**code.n
    proj = np.eye(dim, dtype=complex)
    for g in list(code.generators) + [code.logical_z]:
        proj = proj @ (np.eye(dim) + pauli_matrix(g)) / 2
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    zero = proj[:, col] / np.linalg.norm(proj[:, col])
    one = pauli_matrix(code.logical_x) @ zero
    return zero, one


def encoding_unitary(code: StabilizerCode) -> np.ndarray:
    """Unitary sending ``|a> ⊗ |0...0>`` (logical qubit first) to ``|a_L>``."""
    dim = 2**code.n
    zero, one = logical_basis(code)
    rest = null_space(np.vstack([zero.conj(), one.conj()]))
    u = np.zeros((dim, dim), dtype=complex)
    half = dim // 2
    u[:, 0] = zero
    u[:, half] = one
    others = [i for i in range(dim) if i not in (0, half)]
    u[:, others] = rest
    return u


def encoder(code: StabilizerCode) -> KrausChannel:
    u = encoding_unitary(code)
    return KrausChannel((u[:, [0, 2 ** code.n // 2]],), True, "enc")


def decoder_channels(code: StabilizerCode) -> tuple[KrausChannel, KrausChannel]:
    """``(dec, dec_dyn)``: full decode (unitary then discard ancillas) and its unitary factor."""
    u_dag = encoding_unitary(code).conj().T
    n_anc = 2 ** (code.n - 1)
    ops = tuple(np.kron(np.eye(2), np.eye(n_anc)[a : a + 1]) @ u_dag for a in range(n_anc))
    return KrausChannel(ops, True, "dec"), KrausChannel.unitary(u_dag, "dec_dyn")


def syndrome_projector(code: StabilizerCode, syndrome) -> np.ndarray:
    dim = 2**code.n
    proj = np.eye(dim, dtype=complex)
    for g, bit in zip(code.generators, syndrome):
        proj = proj @ (np.eye(dim) + (-1) ** bit * pauli_matrix(g)) / 2
    return proj


def recovery_channel(code: StabilizerCode) -> KrausChannel:
    """Syndrome measurement followed by the lookup recovery: Kraus ``R_s Pi_s``."""
    ops = [pauli_matrix(r) @ syndrome_projector(code, s) for s, r in code.decoder.items()]
    return KrausChannel(tuple(ops), True, "recovery")


def pauli_mixture(labels_probs: dict[str, float], name: str = "noise") -> KrausChannel:
    labels = list(labels_probs)
    return KrausChannel.mixture(
        [labels_probs[s] for s in labels], [pauli_matrix(PauliString.from_label(s)) for s in labels], name
    )


# --- bundled instances -----------------------------------------------------


def qec_instance(code: StabilizerCode | None = None, flip_prob: float = 0.1) -> EaoqecSpec:
    """Code with single-X noise: each qubit flipped alone with probability ``flip_prob``."""
    code = bit_flip_3() if code is None else code
    n = code.n
    if n * flip_prob > 1:
        raise ValueError("flip_prob too large for the number of qubits")
    noise = {"I" * n: 1 - n * flip_prob}
    for q in range(n):
        noise[PauliString.single(n, q, "X").label] = flip_prob
    dec, dec_dyn = decoder_channels(code)
    return EaoqecSpec(
        k=1, s=n - 1, c=0,
        enc=encoder(code), noise=pauli_mixture(noise), recovery=recovery_channel(code),
        dec=dec, dec_dyn=dec_dyn, name=f"qec[{code.name}]",
    )


def _amplitude_damping(gamma: float) -> KrausChannel:
    return KrausChannel(
        (np.array([[1, 0], [0, np.sqrt(1 - gamma)]]), np.array([[0, np.sqrt(gamma)], [0, 0]])),
        True, "amplitude_damping",
    )


def oqec_instance(gamma: float = 0.3) -> EaoqecSpec:
    """Noiseless subsystem: the noise touches only the gauge qubit B."""
    noise = lift(_amplitude_damping(gamma), left=2, name="noise")
    return EaoqecSpec(
        k=1, s=0, c=0,
        enc=KrausChannel.identity(2, "enc"), noise=noise, recovery=KrausChannel.identity(4, "recovery"),
        dec=KrausChannel.identity(2, "dec"), dec_dyn=KrausChannel.identity(2, "dec_dyn"),
        rho_B=np.eye(2) / 2, name="oqec[noiseless subsystem]",
    )


# Qubit order (a, a', b): Alice's data qubit, her ebit half, Bob's ebit half.
# Stabilizers of the encoded state are X_a' X_b and Z_a' Z_b; Bob's Bell
# measurement on (a', b) reads them out. The correlated error Z_a X_a' is
# flagged by Z_a' Z_b alone, so the lookup table maps 01 -> Z X I.
EA_BELL_CODE = dict(
    name="ea_bell",
    generators=["IXX", "IZZ"],
    logical_x="ZII",
    logical_z="XII",
    decoder={"00": "III", "01": "ZXI", "10": "IZI", "11": "IYI"},
)


def _ea_components(p_error: float = 0.5):
    code = StabilizerCode.from_labels(**EA_BELL_CODE)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    # enc = (H on a) after appending |Phi+>_{a'b}
    enc = KrausChannel((np.kron(h, bell.reshape(4, 1)),), True, "enc")
    noise = pauli_mixture({"III": 1 - p_error, "ZXI": p_error})
    recovery = recovery_channel(code)
    dec_dyn = KrausChannel.unitary(_kron(h, np.eye(2), np.eye(2)), "dec_dyn")
    dec_ops = tuple(np.kron(np.eye(2), np.eye(4)[j : j + 1]) @ dec_dyn.ops[0] for j in range(4))
    dec = KrausChannel(dec_ops, True, "dec")
    return code, enc, noise, recovery, dec, dec_dyn


def eaqec_instance(p_error: float = 0.5) -> EaoqecSpec:
    """One ebit; the channel applies I or Z_a X_a' with equal probability."""
    _, enc, noise, recovery, dec, dec_dyn = _ea_components(p_error)
    return EaoqecSpec(
        k=1, s=0, c=1, enc=enc, noise=noise, recovery=recovery, dec=dec, dec_dyn=dec_dyn,
        name="eaqec[bell-assisted]",
    )


def eaoqec_instance(p_error: float = 0.5, gamma: float = 0.3, dim_k: int = 2) -> EaoqecSpec:
    """EAQEC instance plus a damped gauge qubit B and an unused block K."""
    _, enc, noise, recovery, dec, dec_dyn = _ea_components(p_error)
    noise_h = direct_sum_identity(
        KrausChannel(tuple(np.kron(e, d) for e in noise.ops for d in _amplitude_damping(gamma).ops)),
        dim_k, "noise",
    )
    recovery_h = direct_sum_identity(lift(recovery, right=2), dim_k, "recovery")
    return EaoqecSpec(
        k=1, s=0, c=1, enc=enc, noise=noise_h, recovery=recovery_h, dec=dec, dec_dyn=dec_dyn,
        rho_B=np.eye(2) / 2, dim_K=dim_k, name="eaoqec[bell-assisted + gauge]",
    )


# --- reduction suite -------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    value: float = 0.0


def identity_error(spec: EaoqecSpec, n_states: int = N_RANDOM_STATES, seed: int = 7) -> float:
    """Largest ``||P(rho) - rho||_1`` of the pipeline over seeded random states."""
    ch = eaoqec_pipeline(spec)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_states):
        rho = random_density_matrix(spec.dim_logical, rng)
        worst = max(worst, trace_norm(ch.apply(rho) - rho))
    return worst


def _stage_gap(spec, kind, n_states, seed):
    rng = np.random.default_rng(seed)
    worst, where = 0.0, ""
    for _ in range(n_states):
        gap, stage = stage_agreement(spec, kind, random_density_matrix(spec.dim_logical, rng))
        if gap > worst:
            worst, where = gap, stage
    return worst, where


def _check_reduction(arrow, spec, kinds, n_states, seed) -> CheckResult:
    problems = []
    ident = identity_error(spec, n_states, seed)
    if ident > IDENTITY_ATOL:
        problems.append(f"pipeline deviates from identity by {ident:.3g}; failing stage: {diagnose_failure(spec)}")
    worst = 0.0
    for kind in kinds:
        gap, stage = _stage_gap(spec, kind, n_states, seed)
        worst = max(worst, gap)
        if gap > STAGE_ATOL:
            problems.append(f"{kind} reference disagrees at stage {stage!r} by {gap:.3g}")
    detail = f"{spec.name}: identity error {ident:.2e}, stage gap {worst:.2e}"
    if problems:
        detail += "; " + "; ".join(problems)
    return CheckResult(arrow, not problems, detail, max(ident, worst))


def diagnose_failure(spec: EaoqecSpec, seed: int = 0) -> str:
    """Name the stage responsible for a non-identity pipeline (recovery_then_decode ordering)."""
    rho = random_density_matrix(spec.dim_logical, np.random.default_rng(seed))
    encoded = spec.enc.apply(rho)
    if trace_norm(spec.dec.apply(encoded) - rho) > IDENTITY_ATOL:
        return "dec (does not invert enc)"
    states = dict(trajectory(eaoqec_stages(spec), rho))
    if trace_norm(states["trace_B"] - encoded) > IDENTITY_ATOL:
        return "recovery (encoded marginal not restored)"
    return "dec"


def reduction_suite(qec_code: StabilizerCode | None = None, n_states: int = N_RANDOM_STATES, seed: int = 7):
    """One CheckResult per hierarchy arrow."""
    qec = qec_instance(qec_code)
    oqec = oqec_instance()
    eaqec = eaqec_instance()
    eaoqec = eaoqec_instance()
    results = [
        _check_reduction("EAOQEC -> EAQEC (dim B = 1)", eaqec, ["eaqec"], n_states, seed),
        _check_reduction("EAOQEC -> OQEC (c = 0)", oqec, ["oqec"], n_states, seed),
        _check_reduction("EAQEC -> QEC (c = 0)", qec, ["eaqec", "qec"], n_states, seed),
        _check_reduction("OQEC -> QEC (dim B = 1)", qec, ["oqec", "qec"], n_states, seed),
    ]
    qcc_parts, qcc_ok, qcc_worst = [], True, 0.0
    for spec in (qec, oqec, eaqec, eaoqec):
        res = qcc_check(eaoqec_pipeline(spec), np.eye(spec.dim_logical), 0.0, "grid")
        qcc_ok &= res.holds
        qcc_worst = max(qcc_worst, res.witness_sup)
        qcc_parts.append(f"{spec.name}: sup >= {res.witness_sup:.2e}")
    results.insert(0, CheckResult("QCC -> EAOQEC (alpha = 0, U = I)", qcc_ok, "; ".join(qcc_parts), qcc_worst))
    return results
