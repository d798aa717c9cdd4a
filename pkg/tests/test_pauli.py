import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import DENSE, dense
from oqftlab.errors import CapacityError
from oqftlab.pauli import (
    PauliChannel1,
    PauliChannelN,
    PauliString,
    apply_pauli_channel,
    biased_channel,
    commutes,
    exclusive_channel,
    iter_paulis,
    pauli_kraus,
    pauli_matrix,
    pauli_mul,
    symplectic_product,
    tensor_iid,
)

P = PauliString.from_label
labels = st.integers(1, 4).flatmap(lambda n: st.tuples(*[st.text("IXYZ", min_size=n, max_size=n)] * 3))


def test_x_times_z_is_minus_i_y():
    r = P("X") * P("Z")
    assert (r.x, r.z, r.phase) == ((1,), (1,), 3)
    assert np.allclose(pauli_matrix(r), DENSE["X"] @ DENSE["Z"])


@pytest.mark.parametrize("a,b", list(itertools.product("IXYZ", repeat=2)))
def test_single_qubit_table_matches_dense(a, b):
    assert np.allclose(pauli_matrix(P(a) * P(b)), DENSE[a] @ DENSE[b])


@pytest.mark.parametrize("p", ["I", "X", "YZ", "XZZXI"])
def test_identity_is_neutral(p):
    assert P("I" * len(p)) * P(p) == P(p)


def test_generator_squares_to_identity():
    r = P("XZZXI") * P("XZZXI")
    assert r.label == "IIIII" and r.phase == 0
    assert np.allclose(dense("XZZXI") @ dense("XZZXI"), np.eye(32))


def test_phase_prefix_round_trip():
    for prefix in ("+", "-", "+i", "-i"):
        p = P(prefix + "XY")
        assert str(p) == prefix + "XY"
        assert np.allclose(pauli_matrix(p), {"+": 1, "-": -1, "+i": 1j, "-i": -1j}[prefix] * dense("XY"))


@pytest.mark.parametrize("bad", ["", "XA", "x", "iX Y"])
def test_bad_labels_rejected(bad):
    with pytest.raises(ValueError):
        P(bad)


def test_size_mismatch_is_argument_error():
    with pytest.raises(ValueError):
        pauli_mul(P("X"), P("XX"))
    with pytest.raises(ValueError):
        commutes(P("X"), P("XX"))


@given(labels)
@settings(max_examples=200, deadline=None)
def test_multiplication_associative_and_dense(abc):
    a, b, c = map(P, abc)
    assert (a * b) * c == a * (b * c)
    assert np.allclose(pauli_matrix(a * b), dense(abc[0]) @ dense(abc[1]))


@pytest.mark.parametrize("n", [1, 2])
def test_commutes_brute_force(n):
    for a, b in itertools.product(list(iter_paulis(n)), repeat=2):
        ma, mb = pauli_matrix(a), pauli_matrix(b)
        assert commutes(a, b) == np.allclose(ma @ mb, mb @ ma)


def test_commutes_examples():
    assert not commutes(P("X"), P("Z"))
    assert commutes(P("XI"), P("IZ"))
    assert commutes(P("XZZXI"), P("IXZZX"))
    m1, m2 = dense("XZZXI"), dense("IXZZX")
    assert np.allclose(m1 @ m2, m2 @ m1)
    assert symplectic_product(P("XZZXI"), P("IXZZX")) == 0


def test_index_and_label_order():
    labs = [p.label for p in iter_paulis(2)]
    assert labs == sorted(labs, key=lambda s: ["IXYZ".index(c) for c in s])
    assert labs[:5] == ["II", "IX", "IY", "IZ", "XI"]
    assert all(PauliString.from_index(i, 2).label == s for i, s in enumerate(labs))


def _superop(m):
    return np.kron(m, m.conj())


def test_biased_channel_matches_superoperator_composition():
    # compose the two generator channels as 4x4 superoperators, then invert the
    # Pauli transfer diagonal lambda_k = tr(s_k S(s_k)) / 2 back to probabilities
    px, pz = 0.1, 0.06
    sx = (1 - px) * _superop(DENSE["I"]) + px * _superop(DENSE["X"])
    sz = (1 - pz) * _superop(DENSE["I"]) + pz * _superop(DENSE["Z"])
    s = sz @ sx
    lam = [np.vdot(DENSE[c].reshape(-1), s @ DENSE[c].reshape(-1)).real / 2 for c in "IXYZ"]
    signs = np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]])
    oracle = np.linalg.solve(signs, lam)
    got = biased_channel(px, pz).as_array()
    assert np.allclose(got, [0.846, 0.094, 0.006, 0.054], atol=1e-15)
    assert np.allclose(got, oracle, atol=1e-14)


@pytest.mark.parametrize("px,pz,expected", [(0.1, 0, (0.9, 0.1, 0, 0)), (0, 0, (1, 0, 0, 0))])
def test_biased_channel_trivial(px, pz, expected):
    assert np.allclose(biased_channel(px, pz).p, expected, atol=0)


@given(st.floats(0, 1), st.floats(0, 1))
def test_biased_channel_normalized(px, pz):
    assert abs(sum(biased_channel(px, pz).p) - 1) <= 1e-15


@pytest.mark.parametrize("px,pz", [(-0.1, 0), (0, 1.2), (float("nan"), 0)])
def test_biased_channel_rejects_out_of_range(px, pz):
    with pytest.raises(ValueError):
        biased_channel(px, pz)


def test_exclusive_channel():
    assert exclusive_channel(0.1, 0.06).p == pytest.approx((0.84, 0.1, 0.0, 0.06))
    with pytest.raises(ValueError):
        exclusive_channel(0.7, 0.6)


def test_channel_validation():
    with pytest.raises(ValueError):
        PauliChannel1((0.5, 0.5, 0.1, 0))
    with pytest.raises(ValueError):
        PauliChannel1((1.1, -0.1, 0, 0))
    with pytest.raises(ValueError):
        PauliChannel1((1, 0, 0))
    with pytest.raises(ValueError):
        PauliChannelN(1, [0.5, 0.5, 0.5, -0.5])


def test_tensor_iid_examples():
    ch = tensor_iid(PauliChannel1.identity(), 5)
    assert len(ch) == 1024
    assert ch.prob("IIIII") == 1 and ch.probs.sum() == 1
    ch2 = tensor_iid(PauliChannel1((0.9, 0.1, 0, 0)), 2)
    assert ch2.prob("II") == pytest.approx(0.81, abs=1e-15)
    assert ch2.prob("XI") == ch2.prob("IX") == pytest.approx(0.09, abs=1e-15)
    assert ch2.prob("XX") == pytest.approx(0.01, abs=1e-15)
    assert dict(ch2.items()) == pytest.approx({"II": 0.81, "IX": 0.09, "XI": 0.09, "XX": 0.01})


def test_tensor_iid_limits():
    with pytest.raises(CapacityError):
        tensor_iid(PauliChannel1.identity(), 13)
    with pytest.raises(ValueError):
        tensor_iid(PauliChannel1.identity(), 0)


def test_tensor_iid_marginals():
    p = np.array([0.7, 0.1, 0.05, 0.15])
    ch = tensor_iid(PauliChannel1(tuple(p)), 3)
    t = ch.probs.reshape(4, 4, 4)
    for axis in range(3):
        others = tuple(a for a in range(3) if a != axis)
        assert np.allclose(t.sum(axis=others), p, atol=1e-15)


def test_apply_pauli_channel_examples():
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    assert np.allclose(apply_pauli_channel(PauliChannelN(1, [1, 0, 0, 0]), rho0), rho0)
    assert np.allclose(apply_pauli_channel(PauliChannelN(1, [0, 1, 0, 0]), rho0), np.diag([0, 1]))
    plus = np.full((2, 2), 0.5, dtype=complex)
    ch = PauliChannelN(1, [0.846, 0.094, 0.006, 0.054])
    out = apply_pauli_channel(ch, plus)
    oracle = sum(p * DENSE[c] @ plus @ DENSE[c].conj().T for p, c in zip(ch.probs, "IXYZ"))
    assert abs(np.trace(out) - 1) < 1e-12
    assert np.allclose(out, oracle, atol=1e-12, rtol=0)
    with pytest.raises(ValueError):
        apply_pauli_channel(ch, np.eye(4) / 4)


def test_apply_pauli_channel_random_states(rng):
    ch = tensor_iid(PauliChannel1((0.8, 0.05, 0.1, 0.05)), 2)
    kraus = pauli_kraus(ch)
    for _ in range(20):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = g @ g.conj().T
        rho /= np.trace(rho)
        out = apply_pauli_channel(ch, rho)
        assert abs(np.trace(out) - 1) < 1e-12
        assert np.allclose(out, out.conj().T, atol=1e-12)
        assert np.allclose(out, sum(k @ rho @ k.conj().T for k in kraus), atol=1e-12)
