import numpy as np
import pytest
import yaml

from oracles import DENSE, dense
from oqftlab.codes import bit_flip_3, code_from_config, five_qubit
from oqftlab.config import bundle_from_dict, bundle_to_dict, load_bundle
from oqftlab.effective import effective_channel
from oqftlab.errors import CapacityError, ConfigError, PipelineError
from oqftlab.oqft import sup_inaccuracy
from oqftlab.pauli import PauliChannel1, pauli_kraus
from oqftlab.superop import (
    EaoqecSpec,
    KrausChannel,
    LinkingMap,
    canonical_kraus,
    check_density_matrix,
    compose,
    eaoqec_instance,
    eaoqec_pipeline,
    eaoqec_stages,
    eaqec_instance,
    oqec_instance,
    partial_trace_B,
    qcc_check,
    qcc_inaccuracy,
    qec_instance,
    random_density_matrix,
    random_pure_state,
    reduction_suite,
    stage_agreement,
    subsume_links,
    trace_norm,
)
from oqftlab.superop.crosscheck import dense_effective_channel, pauli_probabilities
from oqftlab.superop.eaoqec import trajectory
from oqftlab.superop.instances import (
    decoder_channels,
    diagnose_failure,
    encoder,
    identity_error,
    pauli_mixture,
    recovery_channel,
)

X = DENSE["X"]


def random_channel(rng, d_in, d_out, n_ops=3):
    g = rng.normal(size=(n_ops * d_out, d_in)) + 1j * rng.normal(size=(n_ops * d_out, d_in))
    q, _ = np.linalg.qr(g)
    return KrausChannel(tuple(q[i * d_out : (i + 1) * d_out] for i in range(n_ops)))


# --- channels ---------------------------------------------------------------


def test_compose_examples(rng):
    ident = KrausChannel.identity(2)
    flip = KrausChannel.unitary(X)
    rho = random_density_matrix(2, rng)
    assert np.allclose(compose([ident, ident]).apply(rho), rho)
    assert np.allclose(compose([flip, flip]).apply(rho), rho)
    with pytest.raises(ValueError):
        compose([ident, KrausChannel.identity(4)])
    with pytest.raises(ValueError):
        compose([])


def test_compose_matches_sequential_and_is_associative(rng):
    a, b, c = random_channel(rng, 2, 4), random_channel(rng, 4, 4), random_channel(rng, 4, 3)
    for _ in range(10):
        rho = random_density_matrix(2, rng)
        seq = c.apply(b.apply(a.apply(rho)))
        assert np.allclose(compose([a, b, c]).apply(rho), seq, atol=1e-12)
        left = compose([compose([a, b]), c]).apply(rho)
        right = compose([a, compose([b, c])]).apply(rho)
        assert np.allclose(left, right, atol=1e-12)


def test_compose_drops_null_operators():
    proj0 = np.diag([1.0, 0.0])
    proj1 = np.diag([0.0, 1.0])
    meas = KrausChannel((proj0, proj1))
    out = compose([meas, meas])
    assert len(out.ops) == 2


def test_kraus_validation():
    with pytest.raises(ValueError):
        KrausChannel((np.eye(2) * 1.1,))
    with pytest.raises(ValueError):
        KrausChannel(())
    with pytest.raises(ValueError):
        KrausChannel((np.eye(2), np.eye(3)))
    partial = KrausChannel((np.diag([1.0, 0.0]),), trace_preserving=False)
    assert partial.trace_deficit(np.eye(2) / 2) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        KrausChannel((np.eye(2) * 1.1,), trace_preserving=False)


def test_canonical_kraus_same_action(rng):
    ch = random_channel(rng, 2, 2, n_ops=6)
    can = canonical_kraus(ch)
    assert len(can.ops) <= 4
    rho = random_density_matrix(2, rng)
    assert np.allclose(can.apply(rho), ch.apply(rho), atol=1e-12)
    assert np.allclose(can.superop(), ch.superop(), atol=1e-12)


def test_partial_trace_examples(rng):
    ra, rb = random_density_matrix(2, rng), random_density_matrix(3, rng)
    assert np.allclose(partial_trace_B(np.kron(ra, rb), (2, 3)), ra)
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(partial_trace_B(np.outer(bell, bell), (2, 2)), np.eye(2) / 2)
    rho = random_density_matrix(4, rng)
    assert np.trace(partial_trace_B(rho, (2, 2))) == pytest.approx(1, abs=1e-12)
    with pytest.raises(ValueError):
        partial_trace_B(rho, (3, 2))


def test_trace_norm_examples(rng):
    assert trace_norm(X) == pytest.approx(2)
    assert trace_norm(np.diag([0.5, -0.5])) == pytest.approx(1)
    for _ in range(10):
        d = random_density_matrix(2, rng) - random_density_matrix(2, rng)
        assert trace_norm(d) == pytest.approx(2 * np.linalg.eigvalsh(d).max(), abs=1e-12)
    with pytest.raises(ValueError):
        trace_norm(np.ones((2, 3)))


def test_density_matrix_checks(rng):
    check_density_matrix(random_density_matrix(3, rng))
    v = random_pure_state(4, rng)
    check_density_matrix(np.outer(v, v.conj()))
    with pytest.raises(ValueError):
        check_density_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        check_density_matrix(np.array([[0.5, 1], [0, 0.5]]))


# --- QCC ---------------------------------------------------------------------


def test_qcc_inaccuracy_examples(rng):
    u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    rho = random_density_matrix(2, rng)
    assert qcc_inaccuracy(KrausChannel.unitary(u), u, rho) == pytest.approx(0, abs=1e-12)
    assert qcc_inaccuracy(KrausChannel.identity(2), X, np.diag([1, 0])) == pytest.approx(2)
    with pytest.raises(ValueError):
        qcc_inaccuracy(KrausChannel.identity(2), np.eye(4), rho)


@pytest.mark.parametrize("p", [0.05, 0.3, 0.75])
def test_depolarizing_matches_closed_form(p):
    ch = PauliChannel1((1 - p, p / 3, p / 3, p / 3))
    kraus = KrausChannel(tuple(pauli_kraus(ch)))
    res = qcc_check(kraus, np.eye(2), 0.0, resolution=40)
    assert res.witness_sup == pytest.approx(sup_inaccuracy(ch), abs=1e-12)
    assert res.witness_sup == pytest.approx(4 * p / 3, abs=1e-12)
    assert not res.holds and res.lower_bound


def test_qcc_check_examples(rng):
    u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    res = qcc_check(KrausChannel.unitary(u), u, 0.0)
    assert res.holds and res.witness_sup < 1e-9
    res = qcc_check(KrausChannel.identity(2), X, 1.0)
    assert not res.holds and res.witness_sup == pytest.approx(2)
    with pytest.raises(ValueError):
        qcc_check(KrausChannel.identity(2), X, -0.1)


def test_qcc_strategies_and_capacity():
    rng = np.random.default_rng(1)
    ch = random_channel(rng, 3, 3)
    grid = qcc_check(ch, np.eye(3), 0.0, "grid")
    a = qcc_check(ch, np.eye(3), 0.0, "random_restarts", rng=np.random.default_rng(5))
    b = qcc_check(ch, np.eye(3), 0.0, "random_restarts", rng=np.random.default_rng(5))
    assert a.witness_sup == b.witness_sup
    assert a.witness_sup >= grid.witness_sup - 0.05
    with pytest.raises(ValueError):
        qcc_check(ch, np.eye(3), 0.0, "random_restarts")
    with pytest.raises(CapacityError):
        qcc_check(KrausChannel.identity(16), np.eye(16), 0.0, "grid")
    with pytest.raises(CapacityError):
        qcc_check(KrausChannel.identity(128), np.eye(128), 0.0, "random_restarts", rng=rng)
    with pytest.raises(ValueError):
        qcc_check(ch, np.eye(3), 0.0, "annealing")


def test_qcc_conjugation_invariance(rng):
    ch = random_channel(rng, 2, 2)
    u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    w = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    conj = KrausChannel(tuple(w @ k @ w.conj().T for k in ch.ops))
    for _ in range(10):
        rho = random_density_matrix(2, rng)
        a = qcc_inaccuracy(ch, u, rho)
        b = qcc_inaccuracy(conj, w @ u @ w.conj().T, w @ rho @ w.conj().T)
        assert a == pytest.approx(b, abs=1e-12)


def test_linking_maps(rng):
    code = bit_flip_3()
    v = encoder(code).ops[0]
    l2c, c2l = LinkingMap("l2c", v), LinkingMap("c2l", v)
    p_tilde = subsume_links(recovery_channel(code), l2c, c2l)
    assert qcc_check(p_tilde, np.eye(2), 0.0).holds
    with pytest.raises(ValueError):
        LinkingMap("sideways", v)
    with pytest.raises(ValueError):
        LinkingMap("l2c", 2 * v)


# --- pipelines ---------------------------------------------------------------


def test_trivial_pipeline_is_identity(rng):
    ident = KrausChannel.identity(2)
    spec = EaoqecSpec(k=1, s=0, c=0, enc=ident, noise=ident, recovery=ident, dec=ident)
    ch = eaoqec_pipeline(spec)
    rho = random_density_matrix(2, rng)
    assert np.allclose(ch.apply(rho), rho)


@pytest.mark.parametrize("make", [qec_instance, oqec_instance, eaqec_instance, eaoqec_instance])
def test_bundled_instances_are_identity(make):
    spec = make()
    assert identity_error(spec) <= 1e-10
    assert eaoqec_pipeline(spec).trace_preserving or spec.dim_K > 0


def test_qec_instance_brute_force(rng):
    # dense 8-dimensional construction without the pipeline machinery
    spec = qec_instance()
    v = encoder(bit_flip_3()).ops[0]
    for _ in range(20):
        rho = random_density_matrix(2, rng)
        enc = v @ rho @ v.conj().T
        noisy = 0.7 * enc + sum(0.1 * dense(e) @ enc @ dense(e) for e in ("XII", "IXI", "IIX"))
        rec = recovery_channel(bit_flip_3()).apply(noisy)
        out = v.conj().T @ rec @ v
        assert np.allclose(out, rho, atol=1e-12)
        assert np.allclose(eaoqec_pipeline(spec).apply(rho), out, atol=1e-12)


def test_eaqec_instance_brute_force(rng):
    # Bob's Bell measurement on (a', b) detects Z_a X_a' through Z_a' Z_b alone
    spec = eaqec_instance()
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    for _ in range(10):
        psi = random_pure_state(2, rng)
        enc = np.kron(h @ psi, bell)
        bad = dense("ZXI") @ enc
        assert np.allclose(np.vdot(bad, dense("IZZ") @ bad), -1)
        assert np.allclose(np.vdot(bad, dense("IXX") @ bad), 1)
        rho = np.outer(psi, psi.conj())
        assert np.allclose(eaoqec_pipeline(spec).apply(rho), rho, atol=1e-12)


def test_oqec_noise_only_touches_gauge(rng):
    spec = oqec_instance(gamma=0.9)
    rho = random_density_matrix(2, rng)
    states = dict(trajectory(eaoqec_stages(spec), rho))
    # B is changed, the A marginal is not
    assert not np.allclose(states["noise"], np.kron(rho, np.eye(2) / 2))
    assert np.allclose(partial_trace_B(states["noise"], (2, 2)), rho)


def test_reduction_suite_passes():
    results = reduction_suite()
    assert len(results) == 5
    assert all(r.passed for r in results), [r.detail for r in results if not r.passed]


@pytest.mark.parametrize("kind,make", [("qec", qec_instance), ("eaqec", qec_instance), ("oqec", qec_instance),
                                       ("eaqec", eaqec_instance), ("oqec", oqec_instance)])
def test_stage_agreement(kind, make, rng):
    gap, _ = stage_agreement(make(), kind, random_density_matrix(2, rng))
    assert gap <= 1e-12


def test_stage_agreement_rejects_wrong_reference():
    with pytest.raises(ValueError):
        stage_agreement(eaqec_instance(), "qec", np.eye(2) / 2)
    with pytest.raises(ValueError):
        stage_agreement(oqec_instance(), "eaqec", np.eye(2) / 2)


def test_corrupted_decoder_is_diagnosed():
    bad = code_from_config({"builtin": "bit_flip_3", "decoder": {"01": "XXI"}})
    spec = qec_instance(bad)
    assert identity_error(spec) > 0.1
    assert diagnose_failure(spec).startswith("recovery")
    results = reduction_suite(bad)
    failed = [r.name for r in results if not r.passed]
    assert "EAQEC -> QEC (c = 0)" in failed and "OQEC -> QEC (dim B = 1)" in failed


def test_pipeline_errors_name_the_stage():
    spec = qec_instance()
    with pytest.raises(PipelineError) as info:
        eaoqec_stages(spec.replace(noise=KrausChannel.identity(4)))
    assert info.value.stage == "noise"
    with pytest.raises(PipelineError) as info:
        eaoqec_stages(spec.replace(dec=KrausChannel.identity(2)))
    assert info.value.stage == "dec"
    with pytest.raises(PipelineError) as info:
        eaoqec_stages(spec.replace(ordering="decode_then_recovery", dec_dyn=None))
    assert info.value.stage == "dec_dyn"
    with pytest.raises(ValueError):
        spec.replace(ordering="sideways")


def test_leakage_is_trace_deficit(rng):
    # noise that moves weight from A (x) B into K is discarded by project_AB
    spec = eaoqec_instance(dim_k=2)
    d_ab, d_h = spec.dim_A * spec.dim_B, spec.dim_H
    leak = np.eye(d_h)
    leak[[0, d_ab]] = leak[[d_ab, 0]]
    leaky = spec.replace(noise=KrausChannel((np.sqrt(0.9) * np.eye(d_h), np.sqrt(0.1) * leak)))
    ch = eaoqec_pipeline(leaky)
    assert not ch.trace_preserving
    rho = random_density_matrix(2, rng)
    assert np.trace(ch.apply(rho)).real <= 1 + 1e-12
    project = dict(eaoqec_stages(leaky))["project_AB"]
    states = dict(trajectory(eaoqec_stages(leaky), rho))
    assert project.trace_deficit(states["recovery"]) > 0


def test_orderings_compose():
    # both orderings are type-correct; they need not agree
    spec = qec_instance()
    other = spec.replace(ordering="decode_then_recovery")
    names = [n for n, _ in eaoqec_stages(other)]
    assert names == ["enc", "embed_W", "noise", "dec_dyn", "recovery", "project_AB", "trace_B", "dec_kin"]
    ch = eaoqec_pipeline(other)
    assert (ch.in_dim, ch.out_dim) == (2, 2)
    # with the recovery conjugated into the decoded frame the reordered pipeline succeeds
    u = other.dec_dyn.ops[0]
    adapted = KrausChannel(tuple(u @ k @ u.conj().T for k in spec.recovery.ops))
    assert identity_error(other.replace(recovery=adapted)) <= 1e-10


def test_dense_effective_channel_matches_enumeration():
    for code in (bit_flip_3(), five_qubit()):
        ch = PauliChannel1((0.85, 0.05, 0.04, 0.06))
        assert np.allclose(dense_effective_channel(code, ch), effective_channel(code, ch).as_array(), atol=1e-12)


def test_pauli_probabilities_from_choi():
    ch = pauli_mixture({"I": 0.7, "X": 0.1, "Y": 0.15, "Z": 0.05})
    assert np.allclose(pauli_probabilities(ch), [0.7, 0.1, 0.15, 0.05], atol=1e-14)


def test_decoder_inverts_encoder(rng):
    for code in (bit_flip_3(), five_qubit()):
        dec, dec_dyn = decoder_channels(code)
        rho = random_density_matrix(2, rng)
        assert np.allclose(dec.apply(encoder(code).apply(rho)), rho, atol=1e-12)


# --- bundles -----------------------------------------------------------------


@pytest.mark.parametrize("make", [qec_instance, oqec_instance, eaqec_instance, eaoqec_instance])
def test_bundle_round_trip(make, tmp_path, rng):
    spec = make()
    path = tmp_path / "bundle.yaml"
    path.write_text(yaml.safe_dump({"bundle": bundle_to_dict(spec)}))
    again = load_bundle(path)
    rho = random_density_matrix(2, rng)
    assert np.allclose(eaoqec_pipeline(again).apply(rho), eaoqec_pipeline(spec).apply(rho), atol=1e-12)
    assert again.dim_K == spec.dim_K and again.name == spec.name


def test_bundle_errors():
    with pytest.raises(ConfigError):
        bundle_from_dict({"k": 1})
    d = bundle_to_dict(qec_instance())
    d["enc"] = [[[[1, 0]]]]
    with pytest.raises(ConfigError):
        bundle_from_dict(d)
