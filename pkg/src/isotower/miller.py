"""Filtration of isometries by ``rank(phi - I)``, its charts and the Cayley transform.

``V0 = C^d0`` sits inside ``V1 = C^d1`` as the first ``d0`` coordinates, so
the fixed inclusion is ``I = eye(d1, d0)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import expm_h, lambda_values, pk_dim, rho, spectral
from .errors import InvalidInput, OutsideChart
from .linalg import GAP_REL, as_matrix, hermitian_eig, is_isometry, numerical_rank, svd_ascending, tau_gap
from .tower import ThomPoint, TowerPoint, _frames, _theta_frame, make_tower_point

SINGULAR_TOL = 1e-9


def inclusion(d1: int, d0: int) -> np.ndarray:
    return np.eye(d1, d0, dtype=complex)


@dataclass(frozen=True, eq=False)
class FiltrationPoint:
    phi: np.ndarray

    def __post_init__(self):
        phi = as_matrix(self.phi)
        if phi.shape[0] < phi.shape[1]:
            raise InvalidInput("need d1 >= d0")
        if not is_isometry(phi):
            raise InvalidInput("phi is not an isometry")
        object.__setattr__(self, "phi", phi)

    @property
    def inclusionI(self) -> np.ndarray:
        return inclusion(*self.phi.shape)


def filtration_level(p: FiltrationPoint) -> int:
    D = p.phi - p.inclusionI
    if not np.any(D):
        return 0
    return numerical_rank(D, 1e-8)


def gamma_diffeo(W, psi_iso) -> np.ndarray:
    """Subtract the inclusion on ``W``'s complement."""
    W, psi_iso = as_matrix(W), as_matrix(psi_iso)
    d1, d0 = psi_iso.shape
    Wc = np.eye(d0) - W
    I = inclusion(d1, d0)
    if np.linalg.norm(psi_iso @ Wc - I @ Wc) > 1e-9:
        raise InvalidInput("isometry does not agree with the inclusion off W")
    return psi_iso - I @ Wc


def gamma_diffeo_inv(W, M) -> np.ndarray:
    W, M = as_matrix(W), as_matrix(M)
    d1, d0 = M.shape
    Wc = np.eye(d0) - W
    if np.linalg.norm(M @ Wc) > 1e-9:
        raise InvalidInput("matrix does not vanish off W")
    return M + inclusion(d1, d0) @ Wc


def cayley(delta) -> np.ndarray:
    """``(-i delta/2 - 1)(-i delta/2 + 1)^{-1}``, a unitary without eigenvalue 1."""
    delta = as_matrix(delta)
    n = delta.shape[0]
    a = -0.5j * delta
    return (a - np.eye(n)) @ np.linalg.inv(a + np.eye(n))


def cayley_inv(phi) -> np.ndarray:
    phi = as_matrix(phi)
    n = phi.shape[0]
    D = phi - np.eye(n)
    if n and np.linalg.svd(D, compute_uv=False)[-1] <= SINGULAR_TOL:
        raise OutsideChart("phi has eigenvalue 1")
    out = (2 / 1j) * (phi + np.eye(n)) @ np.linalg.inv(D)
    return (out + out.conj().T) / 2


def res_k_map(alpha, p: FiltrationPoint, k: int) -> TowerPoint:
    """Restrict the isometry to ``P_k(alpha)``."""
    if filtration_level(p) > k:
        raise InvalidInput("isometry lies above filtration level k")
    alpha = as_matrix(alpha)
    d0 = alpha.shape[0]
    if k == d0:
        return make_tower_point(k, alpha, p.phi)
    es = hermitian_eig(alpha)
    lam = lambda_values(es.values, k, tau_gap(alpha))
    return TowerPoint(k, alpha, -p.phi @ spectral(es.vectors, lam))


def _blocks(x: TowerPoint):
    k, d0 = x.k, x.d0
    es = hermitian_eig(x.alpha)
    if pk_dim(es.values, k, tau_gap(x.alpha)) < k:
        raise OutsideChart("P_k(alpha) has dimension below k")
    V = es.vectors
    F, G = V[:, d0 - k:], V[:, :d0 - k]
    tF = _theta_frame(x, es.values, V, k)
    th1 = F.conj().T @ tF[:d0]
    th2 = G.conj().T @ tF[:d0]
    th3 = tF[d0:]
    return F, G, th1, th2, th3


def in_chart_B(x: TowerPoint) -> bool:
    try:
        _, _, th1, _, _ = _blocks(x)
    except OutsideChart:
        return False
    return bool(np.linalg.svd(th1 - np.eye(x.k), compute_uv=False)[-1] > SINGULAR_TOL)


def in_chart_A(alpha, p: FiltrationPoint, k: int) -> bool:
    es = hermitian_eig(alpha)
    d0 = es.values.size
    if pk_dim(es.values, k, tau_gap(alpha)) < k:
        return False
    F = es.vectors[:, d0 - k:]
    blk = F.conj().T @ p.phi[:d0] @ F
    return bool(np.linalg.svd(blk - np.eye(k), compute_uv=False)[-1] > SINGULAR_TOL)


def res_k_inverse_on_B(x: TowerPoint) -> FiltrationPoint:
    """Extend the isometry of a chart-B point to all of ``V0`` with ``rank(phi - I) <= k``.

    In the splitting ``V1 = P_k + P_k' + V2`` the given isometry has blocks
    ``th1, th2, th3``.  The extension on ``P_k'`` is ``(th1 - 1) xi``,
    ``th2 xi + 1``, ``th3 xi`` with ``xi = (th1^* - 1)^{-1} th2^*``.
    """
    k, d0, d1 = x.k, x.d0, x.d1
    F, G, th1, th2, th3 = _blocks(x)
    A = th1.conj().T - np.eye(k)
    if np.linalg.svd(A, compute_uv=False)[-1] <= SINGULAR_TOL:
        raise OutsideChart("th1 - I is singular")
    xi = np.linalg.solve(A, th2.conj().T)
    xi1 = (th1 - np.eye(k)) @ xi
    xi2 = th2 @ xi + np.eye(d0 - k)
    xi3 = th3 @ xi
    E0 = np.zeros((d1, d0), dtype=complex)
    E0[:d0] = np.eye(d0)

    def embed(top, mid, low):
        # top in P_k coordinates, mid in P_k' coordinates, low in V2
        out = E0 @ (F @ top + G @ mid)
        if d1 > d0:
            out = out + np.concatenate([np.zeros((d0, low.shape[1])), low], axis=0)
        return out

    phi = embed(th1, th2, th3) @ F.conj().T + embed(xi1, xi2, xi3) @ G.conj().T
    return FiltrationPoint(phi)


def _fpow(x, t):
    """``(x^t - 1)/t``, and ``log x`` at ``t = 0``."""
    if t == 0:
        return np.log(x)
    return (np.power(x, t) - 1.0) / t


def split_gamma(z: ThomPoint):
    """``gamma = I alpha_h + beta_h`` with ``alpha_h: W -> W'`` and ``beta_h`` into ``I W + V2``."""
    d1, d0 = z.gamma.shape
    I = inclusion(d1, d0)
    Wc = np.eye(d0) - z.W
    alpha_h = Wc @ I.conj().T @ z.gamma
    beta_h = z.gamma - I @ alpha_h
    return alpha_h, beta_h


def g0_g1_homotopy(t: float, z: ThomPoint) -> np.ndarray:
    """Hermitian path from ``g_0`` (``t = 0``) to ``g_1`` (``t = 1``)."""
    if not 0 <= t <= 1:
        raise InvalidInput("time must lie in [0, 1]")
    k = z.k
    d1, d0 = z.gamma.shape
    F, G = _frames(z.W)
    alpha_h, beta_h = split_gamma(z)
    s_b, _, _ = svd_ascending(beta_h @ F)
    if not t + s_b[0] > GAP_REL * max(1.0, s_b[-1]):
        raise InvalidInput("needs t + e_0(rho(beta_h)) > 0")
    I = inclusion(d1, d0)
    s, Vw, _ = svd_ascending((t * I @ alpha_h + beta_h) @ F)
    psi_G = G.conj().T @ z.psi @ G
    etop = float(np.linalg.eigvalsh(psi_G)[-1]) if psi_G.size else 0.0
    top = spectral(Vw, _fpow(s, t)) + t * (etop + 1) * np.eye(k)
    H = F @ top @ F.conj().T + (1 - t) * (alpha_h + alpha_h.conj().T) + z.psi
    return (H + H.conj().T) / 2


def g0_prime(z: ThomPoint) -> np.ndarray:
    F, _ = _frames(z.W)
    alpha_h, beta_h = split_gamma(z)
    s, Vw, _ = svd_ascending(beta_h @ F)
    H = F @ spectral(Vw, np.log(s)) @ F.conj().T + alpha_h + alpha_h.conj().T + z.psi
    return (H + H.conj().T) / 2


def g1_prime(z: ThomPoint) -> np.ndarray:
    F, G = _frames(z.W)
    psi_G = G.conj().T @ z.psi @ G
    etop = float(np.linalg.eigvalsh(psi_G)[-1]) if psi_G.size else 0.0
    H = F @ (rho(z.gamma @ F) + etop * np.eye(z.k)) @ F.conj().T + z.psi
    return (H + H.conj().T) / 2


def hermitian_basis(n: int):
    """Orthonormal real basis of ``n x n`` Hermitian matrices under ``Re tr(A^* B)``."""
    out = []
    for i in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[i, i] = 1
        out.append(E)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = E[j, i] = 1 / np.sqrt(2)
            out.append(E)
            E = np.zeros((n, n), dtype=complex)
            E[i, j], E[j, i] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            out.append(E)
    return out


def top_embedding(delta, alpha) -> np.ndarray:
    """``(delta, alpha) -> -Cayley(delta) Exp(alpha)``."""
    return -cayley(delta) @ expm_h(alpha)


def top_splitting_derivative_check(h: float, d0: int = 1) -> dict:
    """Central-difference Jacobian of :func:`top_embedding` at the origin against the identity."""
    if not 1e-6 <= h <= 1e-3:
        raise InvalidInput("step must lie in [1e-6, 1e-3]")
    basis = hermitian_basis(d0)
    n = len(basis)
    I = np.eye(d0)

    def coords(M):
        D = M - I
        A = (D + D.conj().T) / 2
        B = (D - D.conj().T) / 2j
        return np.array([np.real(np.trace(E.conj().T @ B)) for E in basis]
                        + [np.real(np.trace(E.conj().T @ A)) for E in basis])

    J = np.zeros((2 * n, 2 * n))
    zero = np.zeros((d0, d0), dtype=complex)
    for c in range(2 * n):
        E = basis[c % n]
        if c < n:
            plus, minus = top_embedding(h * E, zero), top_embedding(-h * E, zero)
        else:
            plus, minus = top_embedding(zero, h * E), top_embedding(zero, -h * E)
        J[:, c] = (coords(plus) - coords(minus)) / (2 * h)
    dev = float(np.max(np.abs(J - np.eye(2 * n))))
    return {"d0": d0, "h": h, "max_deviation": dev, "ok": dev <= 10 * h}
