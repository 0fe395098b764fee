"""Small dense complex linear algebra with the package's tolerance conventions.

Matrices are plain ``numpy`` complex arrays.  Eigenvalues are always reported
in ascending order, so ``values[0]`` is the bottom eigenvalue and
``values[-1]`` the top one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

GAP_REL = 1e-8
EQ_REL = 1e-9
SYM_REL = 1e-12


def _scale(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 1.0
    return max(1.0, float(np.linalg.norm(M, 2)))


def tau_gap(M) -> float:
    """Threshold below which two eigenvalues of ``M`` count as equal."""
    return GAP_REL * _scale(M)


def tol_eq(M) -> float:
    """Tolerance for matrix identities involving ``M``."""
    return EQ_REL * _scale(M)


def tol_sym(M) -> float:
    return SYM_REL * _scale(M)


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise InvalidInput(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInput("matrix has non-finite entries")
    return A


def adjoint(M) -> np.ndarray:
    return np.asarray(M).conj().T


def is_hermitian(M) -> bool:
    A = np.asarray(M)
    return A.shape[0] == A.shape[1] and bool(
        np.linalg.norm(A - A.conj().T) <= tol_sym(A))


def hermitize(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    return (A + A.conj().T) / 2


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.vectors
        return (V * self.values) @ V.conj().T


def hermitian_eig(alpha, check: bool = True) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix, values ascending."""
    A = as_matrix(alpha)
    if A.shape[0] != A.shape[1]:
        raise InvalidInput(f"Hermitian operator must be square, got {A.shape}")
    if check and not is_hermitian(A):
        raise InvalidInput("matrix is not Hermitian")
    w, V = np.linalg.eigh(hermitize(A))
    return EigenSystem(w, V)


def eigvals(alpha) -> np.ndarray:
    return np.linalg.eigvalsh(hermitize(alpha))


def operator_norm(M) -> float:
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def svd_ascending(gamma):
    """Singular data of a ``d1 x d0`` matrix ordered by ascending singular value.

    Returns ``(s, V, U)`` with ``s`` of length ``d0``, ``V`` a ``d0 x d0``
    unitary of right singular vectors and ``U`` a ``d1 x d0`` matrix whose
    columns are the matching left singular vectors.  When ``d1 < d0`` the
    missing singular values are zero and the matching columns of ``U`` are
    zero.
    """
    G = np.asarray(gamma, dtype=complex)
    d1, d0 = G.shape
    U, s, Vh = np.linalg.svd(G, full_matrices=True)
    r = s.size
    if r < d0:
        s = np.concatenate([s, np.zeros(d0 - r)])
        U = np.concatenate([U, np.zeros((d1, d0 - d1), dtype=complex)], axis=1)
    U = U[:, :d0]
    return s[::-1].copy(), Vh.conj().T[:, ::-1].copy(), U[:, ::-1].copy()


def numerical_rank(M, tol: float) -> int:
    """Count of singular values above ``tol * max(1, top singular value)``."""
    if tol <= 0:
        raise InvalidInput("tol must be positive")
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def is_isometry(theta) -> bool:
    T = np.asarray(theta, dtype=complex)
    return bool(np.linalg.norm(T.conj().T @ T - np.eye(T.shape[1])) <= 1e-9 * max(1, T.shape[1]))


def projector_from_frame(F) -> np.ndarray:
    F = as_matrix(F)
    if not is_isometry(F):
        raise InvalidInput("frame is not an isometry")
    return F @ F.conj().T


def frame_from_projector(P) -> np.ndarray:
    """Orthonormal basis (as columns) of the range of a projector."""
    w, V = np.linalg.eigh(hermitize(P))
    return V[:, w > 0.5]


def complement_frame(P) -> np.ndarray:
    w, V = np.linalg.eigh(hermitize(P))
    return V[:, w <= 0.5]


def is_projector(P, tol: float = 1e-9) -> bool:
    P = np.asarray(P, dtype=complex)
    return bool(np.linalg.norm(P @ P - P) <= tol * max(1, P.shape[0])
                and np.linalg.norm(P - P.conj().T) <= tol * max(1, P.shape[0]))


def rel_dev(a, b) -> float:
    """``||a - b|| / max(1, ||a||)`` in operator norm."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return float("inf")
    if a.size == 0:
        return 0.0
    return operator_norm(a - b) / max(1.0, operator_norm(a))
