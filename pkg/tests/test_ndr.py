import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isotower import facial, ndr
from isotower.errors import InvalidInput
from isotower.facial import INF


def test_halfdisc_u_examples():
    assert ndr.halfdisc_u(cmath.exp(0.3j)) == pytest.approx(0.0, abs=1e-12)
    assert ndr.halfdisc_u(0) == 1.0
    assert ndr.halfdisc_u(0.75j) == pytest.approx(0.5)
    with pytest.raises(InvalidInput):
        ndr.halfdisc_u(2.0)
    with pytest.raises(InvalidInput):
        ndr.halfdisc_u(-0.5j)


def test_halfdisc_h_examples():
    z = 0.3 + 0.4j
    assert ndr.halfdisc_h(1.0, z) == pytest.approx(z)
    w = cmath.exp(1.1j)
    assert ndr.halfdisc_h(0.37, w) == pytest.approx(w)
    assert ndr.halfdisc_h(0.0, 0.75 * w) == pytest.approx(w)
    with pytest.raises(InvalidInput):
        ndr.halfdisc_h(1.5, z)


def test_phi_examples():
    assert ndr.phi_conformal((0.0, 0.0)) == pytest.approx(1)
    assert ndr.phi_conformal((0.0, 1.0)) == pytest.approx(1j)
    t = 0.8
    z = ndr.phi_conformal((t, t))
    assert z.imag == pytest.approx(0, abs=1e-15)
    assert z.real == pytest.approx((1 - 2 * t * t) / (1 + 2 * t * t))
    assert ndr.phi_conformal(INF) == -1


def test_phi_inverse_examples():
    assert ndr.phi_inverse(1) == pytest.approx((0.0, 0.0))
    assert ndr.phi_inverse(1j) == pytest.approx((0.0, 1.0), abs=1e-12)
    assert ndr.phi_inverse(-1) is INF


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 50), st.floats(0, 50))
def test_phi_roundtrip_and_strata(a, b):
    t = (min(a, b), max(a, b))
    z = ndr.phi_conformal(t)
    assert abs(z) <= 1 + 1e-12 and z.imag >= -1e-12
    back = ndr.phi_inverse(z)
    if back is not INF:
        assert abs(ndr.phi_conformal(back) - z) <= 1e-10
    assert abs(abs(ndr.phi_conformal((0.0, t[1]))) - 1) <= 1e-12
    assert abs(ndr.phi_conformal((t[1], t[1])).imag) <= 1e-12


def test_ndr_D2_examples():
    p = ndr.ndr_D2()
    for t1 in (0.0, 0.3, 5.0):
        assert p.u((0.0, t1)) == pytest.approx(0, abs=1e-12)
    rng = np.random.default_rng(0)
    for _ in range(50):
        t = tuple(np.sort(rng.exponential(size=2)))
        assert np.allclose(p.h(1.0, t), t, atol=1e-8 * max(1, t[1]))
    assert ndr.u_prime((0.0, 0.0)) == pytest.approx(ndr.halfdisc_u(1.0))


def test_h_prime_is_facial():
    for s in (0.0, 0.25, 0.5, 1.0):
        assert facial.check_facial(ndr.h_prime(s), 300, 11)["ok"]


@pytest.mark.parametrize("make", [ndr.halfdisc_pair, ndr.ndr_D2, lambda: ndr.ndr_hom(2, 3),
                                  lambda: ndr.ndr_hom(1, 1), lambda: ndr.ndr_hom(3, 3)])
def test_axioms_pass(make):
    rep = ndr.check_ndr_axioms(make(), 300, 7)
    assert rep["ok"], rep["witnesses"][:3]


@pytest.mark.parametrize("make", [ndr.halfdisc_pair, ndr.ndr_D2, lambda: ndr.ndr_hom(2, 2)])
def test_fault_injection_detected(make):
    rep = ndr.check_ndr_axioms(ndr.with_shifted_u(make()), 200, 7)
    assert not rep["ok"]
    assert any(w["condition"] == "zero-set" for w in rep["witnesses"])


def test_check_rejects_zero_trials():
    with pytest.raises(InvalidInput):
        ndr.check_ndr_axioms(ndr.halfdisc_pair(), 0, 1)
    with pytest.raises(InvalidInput):
        ndr.ndr_hom(3, 2)


def test_hom_examples():
    rng = np.random.default_rng(3)
    p = ndr.ndr_hom(2, 3)
    G = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    G[:, 1] = 2 * G[:, 0]
    for t in (0.0, 0.4, 1.0):
        assert np.allclose(p.h(t, G), G, atol=1e-9)
    assert p.u(G) <= p.u_zero_tol(G)
    H = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    assert p.u(H) > 0
    small = 0.05 * H
    assert p.u(small) < 1
    assert p.membership(p.h(0.0, small))


def test_hom_equivariance():
    rng = np.random.default_rng(4)
    from isotower.harness import haar_isometry
    p = ndr.ndr_hom(3, 4)
    for _ in range(10):
        G = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        A, B = haar_isometry(4, 4, rng), haar_isometry(3, 3, rng)
        t = rng.uniform()
        assert np.allclose(A @ p.h(t, G) @ B.conj().T, p.h(t, A @ G @ B.conj().T), atol=1e-9)


def test_cofibre_r_examples():
    hd = ndr.halfdisc_pair()
    z = cmath.exp(0.9j)
    u, y = ndr.cofibre_r(hd, z)
    assert u == pytest.approx(0, abs=1e-12) and y == pytest.approx(z)
    r, th = 0.8, 1.3
    u, y = ndr.cofibre_r(hd, r * cmath.exp(1j * th))
    assert u == pytest.approx(2 - 2 * r) and y == pytest.approx(cmath.exp(1j * th))
    p = ndr.ndr_hom(2, 2)
    u, y = ndr.cofibre_r(p, 0.5 * np.eye(2))
    assert u == pytest.approx(1.0) and not p.membership(y)
    # large maps lie near the basepoint, which belongs to A
    u, y = ndr.cofibre_r(p, 5 * np.eye(2))
    assert u < 1 and y is INF and p.membership(y)
    G = np.diag([0.0, 2.0])
    assert ndr.cofibre_r(p, G)[0] == pytest.approx(0, abs=1e-12)
    assert np.allclose(ndr.cofibre_r(p, G)[1], G)
