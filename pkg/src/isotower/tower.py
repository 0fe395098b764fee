"""Points and maps of the tower of eigenspace-restricted isometries.

A level-``k`` point is stored in the coordinates ``(alpha, beta)`` with
``alpha`` Hermitian on ``C^d0`` and ``beta = -theta lambda_k(alpha)`` a
``d1 x d0`` matrix, where ``theta`` is an isometry defined on the top-``k``
eigenspace sum ``P_k(alpha)``.  At the top level ``k = d0`` the isometry is
kept explicitly in ``theta`` and ``beta`` uses ``lambda_{d0-1}``.

A Thom point ``(W, gamma, psi)`` is a rank-``k`` projector ``W``, a map
``gamma`` vanishing off ``W`` and a Hermitian ``psi`` living on ``W``'s
complement.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .calculus import lambda_values, pk_dim, rho, spectral
from .errors import DegenerateAlpha, InvalidInput, NotInjective, OutsideChart
from .facial import INF, FacialMapSpec
from .linalg import (as_matrix, complement_frame, frame_from_projector, hermitian_eig,
                     is_hermitian, numerical_rank, operator_norm, svd_ascending, tau_gap)

BASEPOINT = INF


@dataclass(frozen=True, eq=False)
class TowerPoint:
    k: int
    alpha: np.ndarray
    beta: np.ndarray
    theta: Optional[np.ndarray] = None

    @property
    def d0(self) -> int:
        return self.alpha.shape[0]

    @property
    def d1(self) -> int:
        return self.beta.shape[0]


@dataclass(frozen=True, eq=False)
class ThomPoint:
    k: int
    W: np.ndarray
    gamma: np.ndarray
    psi: np.ndarray

    @property
    def d0(self) -> int:
        return self.W.shape[0]

    @property
    def d1(self) -> int:
        return self.gamma.shape[0]


@dataclass(frozen=True, eq=False)
class DeltaValue:
    """Suspension coordinate ``t`` with a Thom point; ``twisted`` marks the orientation flip."""

    t: float
    point: ThomPoint
    twisted: bool = True


def _eig(alpha):
    es = hermitian_eig(alpha)
    return es.values, es.vectors, tau_gap(alpha)


def _frames(W):
    return frame_from_projector(W), complement_frame(W)


# ---------------------------------------------------------------- construction

def make_tower_point(k: int, alpha, theta) -> TowerPoint:
    """Level-``k`` point from ``alpha`` and an isometry ``theta`` on ``P_k(alpha)``.

    ``theta`` is a ``d1 x d0`` matrix; only its restriction to ``P_k(alpha)``
    is used.  At ``k = d0`` it must be a full isometry.
    """
    alpha = as_matrix(alpha)
    theta = as_matrix(theta)
    d0 = alpha.shape[0]
    if not is_hermitian(alpha):
        raise InvalidInput("alpha must be Hermitian")
    if theta.shape[1] != d0:
        raise InvalidInput("theta must be d1 x d0")
    if not 0 <= k <= d0:
        raise InvalidInput(f"level {k} out of range")
    values, V, tau = _eig(alpha)
    if pk_dim(values, k, tau) < k:
        raise DegenerateAlpha(f"top eigenspace sum of dimension {k} does not exist")
    F = V[:, d0 - k:]
    tF = theta @ F
    if np.linalg.norm(tF.conj().T @ tF - np.eye(k)) > 1e-8 * max(1, k):
        raise InvalidInput("theta is not isometric on P_k(alpha)")
    if k == d0:
        beta = -theta @ spectral(V, values - values[0])
        return TowerPoint(k, alpha, beta, theta)
    lam = lambda_values(values, k, tau)[d0 - k:]
    return TowerPoint(k, alpha, -(tF * lam) @ F.conj().T)


def tower_invariant_deviation(x: TowerPoint) -> float:
    """``||rho(beta) - lambda(alpha)||`` relative to scale."""
    values, V, tau = _eig(x.alpha)
    kk = min(x.k, x.d0 - 1)
    lam = spectral(V, lambda_values(values, kk, tau))
    return operator_norm(rho(x.beta) - lam) / max(1.0, operator_norm(lam))


def _theta_frame(x: TowerPoint, values, V, m: int):
    """Isometry on the top ``m`` eigenvectors, as a ``d1 x m`` matrix."""
    d0 = x.d0
    F = V[:, d0 - m:]
    if x.k == d0:
        return x.theta @ F
    lam = lambda_values(values, x.k, tau_gap(x.alpha))[d0 - m:]
    return -(x.beta @ F) / lam


def isometry_of(x: TowerPoint) -> np.ndarray:
    """The isometric part of ``x`` as a ``d1 x d0`` matrix vanishing off ``P_k``."""
    values, V, tau = _eig(x.alpha)
    m = pk_dim(values, x.k, tau)
    F = V[:, x.d0 - m:]
    return _theta_frame(x, values, V, m) @ F.conj().T


def pi_k(x: TowerPoint) -> TowerPoint:
    """Restrict the isometry of a level-``k`` point to ``P_{k-1}``."""
    k = x.k
    if k < 1:
        raise InvalidInput("pi_k needs level at least 1")
    if k == x.d0:
        return TowerPoint(k - 1, x.alpha, x.beta)
    values, V, tau = _eig(x.alpha)
    lk = lambda_values(values, k, tau)
    lk1 = lambda_values(values, k - 1, tau)
    ratio = np.divide(lk1, lk, out=np.zeros_like(lk), where=lk > 0)
    # sigma(beta) lambda_{k-1}(alpha), written in the eigenbasis of alpha
    return TowerPoint(k - 1, x.alpha, x.beta @ spectral(V, ratio))


def in_Y_k(alpha, k: int) -> bool:
    values, _, tau = _eig(alpha)
    if not 1 <= k <= len(values):
        raise InvalidInput(f"level {k} out of range")
    return pk_dim(values, k, tau) < k


# ---------------------------------------------------------------- q_k / r_k

def q_k(x: TowerPoint) -> ThomPoint:
    """Send a point off ``Y_k`` to ``(P_k(alpha), -theta Exp(alpha), -log(e - alpha))``."""
    k, d0 = x.k, x.d0
    values, V, tau = _eig(x.alpha)
    if pk_dim(values, k, tau) < k:
        raise DegenerateAlpha("alpha lies in Y_k")
    F, G = V[:, d0 - k:], V[:, :d0 - k]
    tF = _theta_frame(x, values, V, k)
    gamma = -(tF * np.exp(values[d0 - k:])) @ F.conj().T
    psi = -(G * np.log(values[d0 - k] - values[:d0 - k])) @ G.conj().T
    return ThomPoint(k, F @ F.conj().T, gamma, psi)


def r_k(z: ThomPoint) -> TowerPoint:
    """Inverse of :func:`q_k` on Thom points whose map is injective on ``W``."""
    k, d0 = z.k, z.d0
    F, G = _frames(z.W)
    s, Vw, U = svd_ascending(z.gamma @ F)
    if s[0] <= tau_gap(z.gamma):
        raise NotInjective("gamma is not injective on W")
    log_rho = spectral(Vw, np.log(s))
    ev, Vp = np.linalg.eigh(G.conj().T @ z.psi @ G)
    low = np.log(s[0]) - np.exp(-ev)
    alpha = (G @ Vp * low) @ (G @ Vp).conj().T + F @ log_rho @ F.conj().T
    alpha = (alpha + alpha.conj().T) / 2
    tF = -(U @ Vw.conj().T)
    theta = tF @ F.conj().T
    if k == d0:
        return make_tower_point(k, alpha, theta)
    c = low.max()
    beta = -tF @ (log_rho - c * np.eye(k)) @ F.conj().T
    return TowerPoint(k, alpha, beta)


# ---------------------------------------------------------------- tau / f_k / g_k / chi

def tau(x: TowerPoint):
    """Top-minus-one level point to ``(e_0(alpha), beta)``."""
    if x.k != x.d0 - 1:
        raise InvalidInput("tau needs a level d0-1 point")
    return float(np.linalg.eigvalsh(x.alpha)[0]), x.beta


def tau_inv(t: float, delta) -> TowerPoint:
    delta = as_matrix(delta)
    s, _, _ = svd_ascending(delta)
    if s[0] > tau_gap(delta):
        raise InvalidInput("tau_inv needs a non-injective map")
    d0 = delta.shape[1]
    return TowerPoint(d0 - 1, rho(delta) + t * np.eye(d0), delta)


def f_k(x: TowerPoint, k: int):
    """Level ``k-1`` point off ``Y_k`` to ``(e_{d0-k}, Thom point)``."""
    if x.k != k - 1:
        raise InvalidInput("f_k needs a level k-1 point")
    d0 = x.d0
    values, V, tau_ = _eig(x.alpha)
    if pk_dim(values, k, tau_) < k:
        raise DegenerateAlpha("alpha lies in Y_k")
    j = d0 - k
    F, G = V[:, j:], V[:, :j]
    W = F @ F.conj().T
    psi = -(G * np.log(values[j] - values[:j])) @ G.conj().T
    return float(values[j]), ThomPoint(k, W, x.beta @ W, psi)


def g_k(t: float, z: ThomPoint) -> TowerPoint:
    """Inverse of :func:`f_k`: needs ``gamma`` non-injective on ``W``."""
    F, G = _frames(z.W)
    gF = z.gamma @ F
    s, Vw, _ = svd_ascending(gF)
    if s[0] > tau_gap(z.gamma):
        raise InvalidInput("g_k needs gamma non-injective on W")
    ev, Vp = np.linalg.eigh(G.conj().T @ z.psi @ G)
    GV = G @ Vp
    alpha = (GV * (t - np.exp(-ev))) @ GV.conj().T + F @ spectral(Vw, s + t) @ F.conj().T
    return TowerPoint(z.k - 1, (alpha + alpha.conj().T) / 2, z.gamma)


def chi(gamma):
    """Injective map to ``(e_0(log rho), sigma (log rho - e_0))``."""
    G = as_matrix(gamma)
    s, V, U = svd_ascending(G)
    if s[0] <= tau_gap(G):
        raise NotInjective("chi needs an injective map")
    L = np.log(s)
    return float(L[0]), (U * (L - L[0])) @ V.conj().T


# ---------------------------------------------------------------- phi_k / delta_k

def _gram_schmidt(vectors, against=None, count=None, tol=1e-10):
    """Orthonormalise ``vectors`` (columns) after removing ``against``."""
    basis = [] if against is None else [against[:, i] for i in range(against.shape[1])]
    out = []
    for i in range(vectors.shape[1]):
        v = vectors[:, i].astype(complex)
        for b in basis:
            v = v - (b.conj() @ v) * b
        n = np.linalg.norm(v)
        if n > tol:
            v = v / n
            basis.append(v)
            out.append(v)
            if count is not None and len(out) == count:
                break
    if not out:
        return np.zeros((vectors.shape[0], 0), dtype=complex)
    return np.stack(out, axis=1)


def phi_k_isometry(z: ThomPoint) -> np.ndarray:
    """``-sigma(gamma)`` on ``W``, completed on ``Ker gamma`` by Gram-Schmidt."""
    F, _ = _frames(z.W)
    d0, d1 = z.d0, z.d1
    s, Vw, U = svd_ascending(z.gamma @ F)
    good = s > tau_gap(z.gamma)
    src = F @ Vw[:, good]
    img = -U[:, good]
    r = int((~good).sum())
    if r:
        Kbasis = F @ Vw[:, ~good]
        P = Kbasis @ Kbasis.conj().T
        src_k = _gram_schmidt(P @ np.eye(d0), count=r)
        tgt_k = _gram_schmidt(np.eye(d1, dtype=complex), against=img, count=r)
        src = np.concatenate([src, src_k], axis=1)
        img = np.concatenate([img, tgt_k], axis=1)
    return img @ src.conj().T


def phi_k_map(z: ThomPoint) -> TowerPoint:
    """``(psi + (rho(gamma) + e_top(psi)) on W, -sigma(gamma))`` as a level-``k`` point.

    At ``k = d0`` this is ``(log rho(gamma), -sigma(gamma))``.
    """
    k, d0 = z.k, z.d0
    if k == d0:
        s, V, U = svd_ascending(z.gamma)
        if s[0] <= tau_gap(z.gamma):
            raise NotInjective("top-level lift needs an injective map")
        return make_tower_point(d0, spectral(V, np.log(s)), -(U @ V.conj().T))
    F, G = _frames(z.W)
    rho_W = rho(z.gamma @ F)
    psi_G = G.conj().T @ z.psi @ G
    etop = float(np.linalg.eigvalsh(psi_G)[-1]) if psi_G.size else 0.0
    alpha = G @ psi_G @ G.conj().T + F @ (rho_W + etop * np.eye(k)) @ F.conj().T
    theta = phi_k_isometry(z)
    # lambda_k(alpha) is rho(gamma) on W
    beta = -theta @ F @ rho_W @ F.conj().T
    return TowerPoint(k, (alpha + alpha.conj().T) / 2, beta)


def delta_k_map(x: TowerPoint, k: int):
    if in_Y_k(x.alpha, k):
        return BASEPOINT
    t, z = f_k(x, k)
    return DeltaValue(t, z, True)


# ---------------------------------------------------------------- C_g and its presentation

def frak_C(g: FacialMapSpec, z: ThomPoint):
    """Apply a facial map on ``D(d0-k) ^ D+(k)`` to the spectral data of a Thom point.

    The eigenvalues of ``psi`` on ``W``'s complement and the singular values
    of ``gamma`` on ``W`` are fed to ``g``; the result becomes the spectrum of
    ``alpha`` in the matching eigenbasis, with isometry ``-sigma(gamma)``.
    """
    k, d0 = z.k, z.d0
    F, G = _frames(z.W)
    ev, Vp = np.linalg.eigh(G.conj().T @ z.psi @ G)
    s, Vw, U = svd_ascending(z.gamma @ F)
    out = g((tuple(ev), tuple(s)))
    if out is INF:
        return BASEPOINT
    B = np.concatenate([G @ Vp, F @ Vw], axis=1)
    alpha = spectral(B, np.asarray(out))
    alpha = (alpha + alpha.conj().T) / 2
    theta = -(U @ Vw.conj().T) @ F.conj().T
    if k == d0:
        return make_tower_point(k, alpha, theta)
    values, V, tau_ = _eig(alpha)
    return TowerPoint(k, alpha, -theta @ spectral(V, lambda_values(values, k, tau_)))


def third_facial_map(d0: int, k: int) -> FacialMapSpec:
    """``(s, t) -> (s, s_top + t)`` on ``D(d0-k) ^ D+(k)``."""

    def ev(st):
        s, t = st
        top = s[-1] if len(s) else 0.0
        return tuple(s) + tuple(top + ti for ti in t)

    return FacialMapSpec(ev, (d0 - k, k), d0, "plain", name="third-facial")


def p_map(lam, mu_, s, t, k: int) -> ThomPoint:
    """Presentation of Thom points by a unitary, an isometry and two spectra."""
    lam = as_matrix(lam)
    d0 = lam.shape[0]
    L, R = lam[:, d0 - k:], lam[:, :d0 - k]
    gamma = -(as_matrix(mu_) * np.asarray(t)) @ L.conj().T
    psi = spectral(R, np.asarray(s)) if d0 > k else np.zeros((d0, d0), dtype=complex)
    return ThomPoint(k, L @ L.conj().T, gamma, psi)


def q_map(lam, mu_, tprime, k: int) -> TowerPoint:
    """Presentation of level-``k`` points: ``alpha = lam diag(t') lam^*``, isometry ``mu lam^{-1}``."""
    lam = as_matrix(lam)
    d0 = lam.shape[0]
    alpha = spectral(lam, np.asarray(tprime))
    theta = as_matrix(mu_) @ lam[:, d0 - k:].conj().T
    return make_tower_point(k, (alpha + alpha.conj().T) / 2, theta)


# ---------------------------------------------------------------- bundle and Grassmannian charts

def decompose_s(alpha, W):
    """Blocks ``(W a W, W' a W', W' a W)`` of ``alpha`` with ``W' = 1 - W``."""
    alpha, W = as_matrix(alpha), as_matrix(W)
    Wc = np.eye(W.shape[0]) - W
    return W @ alpha @ W, Wc @ alpha @ Wc, Wc @ alpha @ W


def recompose_s(a, b, c):
    return a + b + c + c.conj().T


def grassmann_chart(a, W) -> np.ndarray:
    """Projector onto the graph of ``a: W -> W'`` (``a`` given as a d0 x d0 operator)."""
    a, W = as_matrix(a), as_matrix(W)
    ahat = W + a
    M = np.linalg.pinv(W + a.conj().T @ a, hermitian=True)
    P = ahat @ M @ ahat.conj().T
    return (P + P.conj().T) / 2


def grassmann_chart_inv(P, W) -> np.ndarray:
    P, W = as_matrix(P), as_matrix(W)
    F, _ = _frames(W)
    blk = F.conj().T @ P @ F
    if blk.size and np.min(np.abs(np.linalg.eigvalsh(blk))) <= 1e-9:
        raise OutsideChart("projector is outside the chart around W")
    Wc = np.eye(W.shape[0]) - W
    return Wc @ P @ F @ np.linalg.inv(blk) @ F.conj().T



# ---------------------------------------------------------------- group actions

@dataclass(frozen=True)
class GroupAction:
    """A product of cyclic groups acting through characters on ``C^d0`` and ``C^d1``."""

    orders: tuple
    chars_v0: tuple
    chars_v1: tuple

    def __post_init__(self):
        for c in tuple(self.chars_v0) + tuple(self.chars_v1):
            if len(c) != len(self.orders):
                raise InvalidInput("character length does not match the group")

    def _diag(self, chars, g):
        ph = [sum(ci * gi / n for ci, gi, n in zip(c, g, self.orders)) for c in chars]
        return np.diag(np.exp(2j * math.pi * np.asarray(ph, dtype=float)))

    def matrices(self, g):
        return self._diag(self.chars_v0, g), self._diag(self.chars_v1, g)

    def elements(self):
        return list(itertools.product(*[range(n) for n in self.orders]))

    def compose(self, g, h):
        return tuple((a + b) % n for a, b, n in zip(g, h, self.orders))


def act(g, value, action: GroupAction, kind: str = "hom"):
    """Conjugation action of ``g`` on points and matrices.

    ``kind`` selects the action on a bare matrix: ``hom`` for maps
    ``V0 -> V1``, ``s`` for operators on ``V0``, ``s1`` for operators on ``V1``.
    """
    D0, D1 = action.matrices(g)
    if value is INF:
        return INF
    if isinstance(value, TowerPoint):
        th = None if value.theta is None else D1 @ value.theta @ D0.conj().T
        return TowerPoint(value.k, D0 @ value.alpha @ D0.conj().T,
                          D1 @ value.beta @ D0.conj().T, th)
    if isinstance(value, ThomPoint):
        return ThomPoint(value.k, D0 @ value.W @ D0.conj().T,
                         D1 @ value.gamma @ D0.conj().T, D0 @ value.psi @ D0.conj().T)
    if isinstance(value, DeltaValue):
        return DeltaValue(value.t, act(g, value.point, action), value.twisted)
    if isinstance(value, tuple):
        return tuple(act(g, v, action, kind) for v in value)
    if isinstance(value, (float, int)):
        return value
    M = as_matrix(value)
    if kind == "s":
        return D0 @ M @ D0.conj().T
    if kind == "s1":
        return D1 @ M @ D1.conj().T
    return D1 @ M @ D0.conj().T


# ---------------------------------------------------------------- null homotopies

NULL_FAMILIES = ("top-1", "top-2", "mid-1", "mid-2", "mid-3")


def null_homotopy(name: str, t: float, point, k: Optional[int] = None):
    """Evaluate one of the five null-homotopy families at time ``t >= 0``.

    * ``top-1``: injective ``gamma`` to ``(log(rho + t), sigma (log(rho + t) - e_0))``.
    * ``top-2``: top-level point to ``(e_0, -theta (alpha - e_0 + t))``.
    * ``mid-1``: Thom point to ``(psi + (rho + e_top(psi) + t) on W, sigma lambda_{k-1})``.
    * ``mid-2``: level-``k`` point to ``(e_{d0-k}, W, -theta (lambda_{k-1} + t) on W, psi)``.
    * ``mid-3``: level-``(k-1)`` point to ``(e_j, level-k point)`` with ``j = d0 - k``.
    """
    if t < 0:
        raise InvalidInput("time must be nonnegative")
    if name == "top-1":
        G = as_matrix(point)
        s, V, U = svd_ascending(G)
        if not t + s[0] > 0:
            raise InvalidInput("top-1 needs t + e_0(rho) > 0")
        L = np.log(s + t)
        return TowerPoint(G.shape[1] - 1, spectral(V, L), (U * (L - L[0])) @ V.conj().T)
    if name == "top-2":
        x = point
        if x.k != x.d0:
            raise InvalidInput("top-2 needs a top-level point")
        values = np.linalg.eigvalsh(x.alpha)
        if x.d0 >= 2 and not values[1] - values[0] + t > 0:
            raise InvalidInput("top-2 needs e_1 - e_0 + t > 0")
        shifted = x.alpha - (values[0] - t) * np.eye(x.d0)
        return float(values[0]), -x.theta @ shifted
    if name == "mid-1":
        z = point
        kk = z.k
        F, G = _frames(z.W)
        s, Vw, U = svd_ascending(z.gamma @ F)
        psi_G = G.conj().T @ z.psi @ G
        etop = float(np.linalg.eigvalsh(psi_G)[-1]) if psi_G.size else 0.0
        alpha = G @ psi_G @ G.conj().T + F @ spectral(Vw, s + etop + t) @ F.conj().T
        # sigma(gamma) lambda_{k-1}(alpha_t) does not depend on t
        beta = (U * (s - s[0])) @ Vw.conj().T @ F.conj().T
        return TowerPoint(kk - 1, (alpha + alpha.conj().T) / 2, beta)
    if name == "mid-2":
        x = point
        kk, d0 = x.k, x.d0
        values, V, tau_ = _eig(x.alpha)
        if pk_dim(values, kk, tau_) < kk:
            raise InvalidInput("mid-2 needs a point off Y_k")
        j = d0 - kk
        F, G = V[:, j:], V[:, :j]
        tF = _theta_frame(x, values, V, kk)
        lam1 = lambda_values(values, kk - 1, tau_)[j:]
        gamma = -(tF * (lam1 + t)) @ F.conj().T
        psi = -(G * np.log(values[j] - values[:j])) @ G.conj().T
        return float(values[j]), ThomPoint(kk, F @ F.conj().T, gamma, psi)
    if name == "mid-3":
        x = point
        if k is None:
            k = x.k + 1
        d0 = x.d0
        if x.k != k - 1 or not 1 <= k < d0:
            raise InvalidInput("mid-3 needs a level k-1 point with 1 <= k < d0")
        j = d0 - k
        values, V, tau_ = _eig(x.alpha)
        gap = values[j] - values[j - 1] + t
        if not gap > 0:
            raise InvalidInput("mid-3 needs e_j - e_{j-1} + t > 0")
        m = pk_dim(values, k, tau_)
        low = values[j] - values[:d0 - m] + t
        if np.any(low <= 0):
            return BASEPOINT
        bt = np.concatenate([-np.log(low), values[d0 - m:] - values[j] - math.log(gap)])
        B = spectral(V, bt)
        return float(values[j]), TowerPoint(k, (B + B.conj().T) / 2, x.beta)
    raise InvalidInput(f"unknown null-homotopy family {name!r}")


def monitored_norm(name: str, out) -> float:
    """The quantity that grows without bound along each null homotopy."""
    if name == "top-1":
        return float(np.exp(np.linalg.eigvalsh(out.alpha)[-1]))
    if name == "top-2":
        return operator_norm(out[1])
    if name == "mid-1":
        return operator_norm(out.alpha)
    if name == "mid-2":
        return operator_norm(out[1].gamma)
    if name == "mid-3":
        return float(np.exp(-np.linalg.eigvalsh(out[1].alpha)[0]))
    raise InvalidInput(f"unknown null-homotopy family {name!r}")


def is_non_injective(gamma) -> bool:
    G = as_matrix(gamma)
    return numerical_rank(G, 1e-8) < G.shape[1] if np.any(G) else True
