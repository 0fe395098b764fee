import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isotower.errors import InvalidInput
from isotower.harness import random_hermitian, haar_isometry
from isotower.linalg import (adjoint, eigvals, hermitian_eig, is_projector, numerical_rank,
                             operator_norm, projector_from_frame, svd_ascending, tau_gap, tol_eq)


def test_adjoint_examples():
    assert np.array_equal(adjoint(np.array([[1j]])), np.array([[-1j]]))
    assert np.array_equal(adjoint(np.eye(3)), np.eye(3))
    assert np.array_equal(adjoint(np.array([[0, 1], [0, 0]])), np.array([[0, 0], [1, 0]]))


def test_adjoint_involution(rng):
    M = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
    assert np.array_equal(adjoint(adjoint(M)), M)


def test_eig_diagonal_and_swap():
    es = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(es.values, [1, 2, 3])
    es = hermitian_eig(np.array([[0, 1], [1, 0]]))
    assert np.allclose(es.values, [-1, 1])
    v0 = es.vectors[:, 0]
    assert abs(abs(np.vdot(v0, np.array([1, -1]) / np.sqrt(2))) - 1) < 1e-12
    v1 = es.vectors[:, 1]
    assert abs(abs(np.vdot(v1, np.array([1, 1]) / np.sqrt(2))) - 1) < 1e-12


def test_eig_matches_characteristic_polynomial(rng):
    # independent oracle: roots of the characteristic polynomial via a companion matrix
    A = random_hermitian(4, rng)
    coeffs = np.poly(A)
    companion = np.diag(np.ones(3), -1).astype(complex)
    companion[0, :] = -coeffs[1:]
    roots = np.sort(np.linalg.eigvals(companion).real)
    assert np.allclose(hermitian_eig(A).values, roots, atol=1e-8)


def test_eig_reconstruction_and_order(rng):
    for d in range(1, 7):
        A = random_hermitian(d, rng)
        es = hermitian_eig(A)
        assert np.all(np.diff(es.values) >= 0)
        assert np.linalg.norm(es.reconstruct() - A, 2) <= tol_eq(A)
        assert np.allclose(es.vectors.conj().T @ es.vectors, np.eye(d), atol=1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(InvalidInput):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_cluster_projector_is_deterministic(rng):
    U = haar_isometry(4, 4, rng)
    A = U @ np.diag([1.0, 2.0, 2.0, 3.0]) @ U.conj().T
    es = hermitian_eig((A + A.conj().T) / 2)
    V = es.vectors[:, 1:3]
    P = V @ V.conj().T
    expected = U[:, 1:3] @ U[:, 1:3].conj().T
    assert np.linalg.norm(P - expected) < 1e-9


def test_operator_norm_examples(rng):
    assert operator_norm(np.diag([2.0, -3.0])) == pytest.approx(3.0)
    assert operator_norm(np.array([[0, 2], [0, 0]])) == pytest.approx(2.0)
    G = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    # power iteration oracle on G^* G
    v = rng.normal(size=4) + 0j
    for _ in range(2000):
        v = G.conj().T @ (G @ v)
        v /= np.linalg.norm(v)
    assert operator_norm(G) == pytest.approx(np.linalg.norm(G @ v), abs=1e-8)


def test_operator_norm_hermitian_is_extreme_eigenvalue(rng):
    A = random_hermitian(5, rng)
    e = eigvals(A)
    assert operator_norm(A) == pytest.approx(max(abs(e[0]), abs(e[-1])), rel=1e-12)


def test_projector_from_frame_examples():
    assert np.allclose(projector_from_frame(np.array([[1], [0]])), np.diag([1, 0]))
    U = haar_isometry(3, 3, 0)
    assert np.allclose(projector_from_frame(U), np.eye(3))
    f = np.array([[1], [1]]) / np.sqrt(2)
    assert np.allclose(projector_from_frame(f), [[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(InvalidInput):
        projector_from_frame(np.array([[2.0], [0.0]]))


def test_projector_invariants(rng):
    F = haar_isometry(5, 2, rng)
    P = projector_from_frame(F)
    assert is_projector(P)
    assert np.trace(P).real == pytest.approx(2)
    assert np.allclose(P @ F, F)


def test_numerical_rank_examples(rng):
    assert numerical_rank(np.zeros((2, 2)), 1e-8) == 0
    assert numerical_rank(np.eye(3), 1e-8) == 3
    v = rng.normal(size=(4, 1)) + 1j * rng.normal(size=(4, 1))
    assert numerical_rank(v @ v.conj().T, 1e-8) == 1
    with pytest.raises(InvalidInput):
        numerical_rank(np.eye(2), 0.0)


def test_svd_ascending_shapes_and_reconstruction(rng):
    for d1, d0 in [(3, 2), (2, 2), (2, 3), (4, 1)]:
        G = rng.normal(size=(d1, d0)) + 1j * rng.normal(size=(d1, d0))
        s, V, U = svd_ascending(G)
        assert s.shape == (d0,) and V.shape == (d0, d0) and U.shape == (d1, d0)
        assert np.all(np.diff(s) >= 0)
        assert np.allclose(U @ np.diag(s) @ V.conj().T, G)


def test_tau_gap_scaling():
    assert tau_gap(np.eye(2) * 0.1) == pytest.approx(1e-8)
    assert tau_gap(np.eye(2) * 100) == pytest.approx(1e-6)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1), st.floats(1e-6, 10.0))
def test_eigenvalue_lipschitz(d, seed, scale):
    r = np.random.default_rng(seed)
    a = random_hermitian(d, r)
    b = a + scale * random_hermitian(d, r)
    assert np.max(np.abs(eigvals(a) - eigvals(b))) <= operator_norm(a - b) + 1e-9
