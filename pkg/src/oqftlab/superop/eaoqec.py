"""
Entanglement-assisted operator error-correction pipelines.

Spaces: Alice's k logical qubits are encoded into subsystem A, which holds
the k + s + c transmitted qubits followed by Bob's c ebit halves, so
``dim_A = 2**(k + s + 2c)``. The full space is ``H = A ⊗ B ⊕ K``.

Stage order (recovery_then_decode)::

    enc -> embed_W -> noise -> recovery -> project_AB -> trace_B -> dec

With decode_then_recovery the unitary decoding factor ``dec_dyn`` (a unitary
on A, lifted to H) runs right after the noise, the recovery follows, and the
remaining kinematic decode ``dec ∘ dec_dyn^dagger`` closes the pipeline.

The reference pipelines for the special cases are built from plain matrix
operations (``np.kron``, slicing, ``partial_trace_B``) rather than from
Kraus forms, so reductions are checked across two independent routes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import block_diag

from ..errors import PipelineError
from .channels import (
    STATE_ATOL,
    KrausChannel,
    compose,
    direct_sum_identity,
    lift,
    partial_trace_B,
    partial_trace_channel,
)

ORDERINGS = ("recovery_then_decode", "decode_then_recovery")

Stage = tuple[str, Callable[[np.ndarray], np.ndarray]]


def embed_channel(dim_a: int, rho_b: np.ndarray, dim_k: int) -> KrausChannel:
    """``W_rhoB(rho_A) = rho_A ⊗ rho_B ⊕ 0_K`` as a channel from A to H."""
    rho_b = np.asarray(rho_b, dtype=complex)
    dim_b = rho_b.shape[0]
    w, v = np.linalg.eigh(rho_b)
    ops = []
    for lam, vec in zip(w, v.T):
        if lam <= STATE_ATOL:
            continue
        k = np.kron(np.eye(dim_a), vec.reshape(dim_b, 1)) * np.sqrt(lam)
        ops.append(np.vstack([k, np.zeros((dim_k, dim_a))]))
    return KrausChannel(tuple(ops), True, "embed_W")


def projection_channel(dim_ab: int, dim_k: int) -> KrausChannel:
    """``F_AB``: restriction of H onto ``A ⊗ B``; weight in K is discarded."""
    return KrausChannel((np.eye(dim_ab, dim_ab + dim_k),), dim_k == 0, "project_AB")


@dataclass(frozen=True, eq=False)
class EaoqecSpec:
    """One EAOQEC instance. ``enc``: 2**k -> A, ``noise`` and ``recovery``: H -> H, ``dec``: A -> 2**k."""

    k: int
    s: int
    c: int
    enc: KrausChannel
    noise: KrausChannel
    recovery: KrausChannel
    dec: KrausChannel
    rho_B: np.ndarray = field(default_factory=lambda: np.eye(1))
    dim_K: int = 0
    dec_dyn: KrausChannel | None = None
    ordering: str = "recovery_then_decode"
    name: str = "eaoqec"

    def __post_init__(self):
        if self.ordering not in ORDERINGS:
            raise ValueError(f"ordering must be one of {ORDERINGS}, got {self.ordering!r}")
        if min(self.k, self.s, self.c, self.dim_K) < 0 or self.k < 1:
            raise ValueError("k must be >= 1 and s, c, dim_K >= 0")
        rho_b = np.asarray(self.rho_B, dtype=complex)
        if rho_b.ndim != 2 or rho_b.shape[0] != rho_b.shape[1] or abs(np.trace(rho_b) - 1) > STATE_ATOL:
            raise ValueError("rho_B must be a square unit-trace matrix")
        object.__setattr__(self, "rho_B", rho_b)

    @property
    def dim_B(self) -> int:
        return self.rho_B.shape[0]

    @property
    def dim_A(self) -> int:
        return 2 ** (self.k + self.s + 2 * self.c)

    @property
    def dim_H(self) -> int:
        return self.dim_A * self.dim_B + self.dim_K

    @property
    def dim_logical(self) -> int:
        return 2**self.k

    def replace(self, **changes) -> "EaoqecSpec":
        from dataclasses import replace

        return replace(self, **changes)


def _expect(stage: str, ch: KrausChannel, d_in: int, d_out: int):
    if ch.in_dim != d_in or ch.out_dim != d_out:
        raise PipelineError(stage, f"expected a {d_in} -> {d_out} map, got {ch.in_dim} -> {ch.out_dim}")


def eaoqec_stages(spec: EaoqecSpec) -> list[tuple[str, KrausChannel]]:
    """Named stages in application order, after checking the dimension chain."""
    d_l, d_a, d_b, d_k, d_h = spec.dim_logical, spec.dim_A, spec.dim_B, spec.dim_K, spec.dim_H
    _expect("enc", spec.enc, d_l, d_a)
    _expect("noise", spec.noise, d_h, d_h)
    _expect("recovery", spec.recovery, d_h, d_h)
    _expect("dec", spec.dec, d_a, d_l)
    embed = embed_channel(d_a, spec.rho_B, d_k)
    project = projection_channel(d_a * d_b, d_k)
    trace_b = partial_trace_channel(d_a, d_b)
    enc = spec.enc.with_name("enc")
    noise = spec.noise.with_name("noise")
    recovery = spec.recovery.with_name("recovery")
    if spec.ordering == "recovery_then_decode":
        return [
            ("enc", enc),
            ("embed_W", embed),
            ("noise", noise),
            ("recovery", recovery),
            ("project_AB", project),
            ("trace_B", trace_b),
            ("dec", spec.dec.with_name("dec")),
        ]
    if spec.dec_dyn is None:
        raise PipelineError("dec_dyn", "decode_then_recovery needs the unitary decoding factor dec_dyn")
    _expect("dec_dyn", spec.dec_dyn, d_a, d_a)
    if len(spec.dec_dyn.ops) != 1:
        raise PipelineError("dec_dyn", "the dynamic decoding factor must be a single unitary")
    u = spec.dec_dyn.ops[0]
    if not np.allclose(u.conj().T @ u, np.eye(d_a), atol=1e-10, rtol=0):
        raise PipelineError("dec_dyn", "dynamic decoding factor is not unitary")
    dec_dyn_h = direct_sum_identity(lift(spec.dec_dyn, right=d_b), d_k, "dec_dyn")
    dec_kin = KrausChannel(tuple(k @ u.conj().T for k in spec.dec.ops), spec.dec.trace_preserving, "dec_kin")
    return [
        ("enc", enc),
        ("embed_W", embed),
        ("noise", noise),
        ("dec_dyn", dec_dyn_h),
        ("recovery", recovery),
        ("project_AB", project),
        ("trace_B", trace_b),
        ("dec_kin", dec_kin),
    ]


def eaoqec_pipeline(spec: EaoqecSpec) -> KrausChannel:
    """The composite implemented map on the 2**k logical space."""
    return compose([ch for _, ch in eaoqec_stages(spec)], name=f"{spec.name}:{spec.ordering}")


def trajectory(stages, rho: np.ndarray) -> list[tuple[str, np.ndarray]]:
    """States after each stage; ``stages`` holds channels or plain callables."""
    out = []
    for name, st in stages:
        rho = st.apply(rho) if isinstance(st, KrausChannel) else st(rho)
        out.append((name, rho))
    return out


# Reference pipelines for the special cases. Each returns (name, callable) stages.


def qec_reference(enc, noise, recovery, dec) -> list[Stage]:
    """``V_dec R eps V_enc``."""
    return [("enc", enc.apply), ("noise", noise.apply), ("recovery", recovery.apply), ("dec", dec.apply)]


def eaqec_reference(enc, noise, recovery, dec) -> list[Stage]:
    """``V_dec R eps V_enc`` with ebits carried inside the encoder output."""
    return qec_reference(enc, noise, recovery, dec)


def oqec_reference(enc, rho_b, dim_k, noise, recovery, dec) -> list[Stage]:
    """``V_dec Tr_B F_AB R eps W_rhoB V_enc`` from direct matrix operations."""
    rho_b = np.asarray(rho_b, dtype=complex)
    d_b = rho_b.shape[0]
    d_a = enc.out_dim

    def embed(r):
        return block_diag(np.kron(r, rho_b), np.zeros((dim_k, dim_k)))

    def project(r):
        return r[: d_a * d_b, : d_a * d_b]

    def trace_b(r):
        return partial_trace_B(r, (d_a, d_b))

    return [
        ("enc", enc.apply),
        ("embed_W", embed),
        ("noise", noise.apply),
        ("recovery", recovery.apply),
        ("project_AB", project),
        ("trace_B", trace_b),
        ("dec", dec.apply),
    ]


def reference_stages(kind: str, spec: EaoqecSpec) -> list[Stage]:
    """Reference pipeline of the given kind fed with ``spec``'s components."""
    if kind in ("qec", "eaqec"):
        if spec.dim_B != 1 or spec.dim_K != 0:
            raise ValueError(f"{kind} reference needs dim_B == 1 and an empty K")
        if kind == "qec" and spec.c != 0:
            raise ValueError("qec reference needs c == 0")
        fn = qec_reference if kind == "qec" else eaqec_reference
        return fn(spec.enc, spec.noise, spec.recovery, spec.dec)
    if kind == "oqec":
        if spec.c != 0:
            raise ValueError("oqec reference needs c == 0")
        return oqec_reference(spec.enc, spec.rho_B, spec.dim_K, spec.noise, spec.recovery, spec.dec)
    raise ValueError(f"unknown reference kind {kind!r}")


_DEGENERATE = {"embed_W", "project_AB", "trace_B"}


def stage_agreement(spec: EaoqecSpec, kind: str, rho: np.ndarray) -> tuple[float, str]:
    """Largest entrywise gap between the EAOQEC trajectory and a reference trajectory.

    Stages absent from the reference (the W / F / Tr_B steps that degenerate to
    identities when dim_B == 1 and K is empty) are compared with their own
    input. Returns the gap and the name of the worst stage.
    """
    full = trajectory(eaoqec_stages(spec), rho)
    ref = dict(trajectory(reference_stages(kind, spec), rho))
    worst, worst_stage = 0.0, ""
    prev = rho
    for name, state in full:
        if name in ref:
            other = ref[name]
        elif name in _DEGENERATE:
            other = prev
        else:
            raise ValueError(f"stage {name!r} has no counterpart in the {kind} reference")
        gap = float(np.abs(state - other).max()) if state.shape == other.shape else np.inf
        if gap > worst:
            worst, worst_stage = gap, name
        prev = state
    return worst, worst_stage
