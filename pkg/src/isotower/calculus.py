"""Functional calculus on Hermitian matrices, polar data, and top-eigenspace constructions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidInput, NotInjective
from .linalg import as_matrix, hermitian_eig, svd_ascending, tau_gap

DOMAINS = ("reals", "nonnegative-reals", "positive-reals", "complex")


@dataclass(frozen=True)
class ScalarFunction:
    """A vectorised scalar function together with the set it is defined on."""

    fn: Callable[[np.ndarray], np.ndarray]
    domain: str = "reals"
    name: str = ""

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise InvalidInput(f"unknown domain tag {self.domain!r}")

    def __call__(self, x):
        return self.fn(x)


EXP = ScalarFunction(np.exp, "reals", "exp")
LOG = ScalarFunction(np.log, "positive-reals", "log")
SQRT = ScalarFunction(np.sqrt, "nonnegative-reals", "sqrt")


def _check_domain(f: ScalarFunction, values: np.ndarray, tol: float) -> np.ndarray:
    if f.domain == "positive-reals" and np.any(values <= 0):
        raise DomainError(f"{f.name or 'function'} needs a positive spectrum, got min {values.min():.3g}")
    if f.domain == "nonnegative-reals":
        if np.any(values < -tol):
            raise DomainError(f"{f.name or 'function'} needs a nonnegative spectrum, got min {values.min():.3g}")
        values = np.clip(values, 0.0, None)
    return values


def spectral(V: np.ndarray, values) -> np.ndarray:
    """``V diag(values) V^*``."""
    return (V * np.asarray(values)) @ V.conj().T


def apply_to_spectrum(f, alpha) -> np.ndarray:
    """Replace the eigenvalues of ``alpha`` by their images under ``f``."""
    if not isinstance(f, ScalarFunction):
        f = ScalarFunction(f)
    es = hermitian_eig(alpha)
    values = _check_domain(f, es.values, tau_gap(alpha))
    out = np.asarray(f(values))
    result = spectral(es.vectors, out)
    if not np.iscomplexobj(out) or np.all(np.imag(out) == 0):
        result = (result + result.conj().T) / 2
    return result


def expm_h(alpha) -> np.ndarray:
    return apply_to_spectrum(EXP, alpha)


def logm_h(alpha) -> np.ndarray:
    return apply_to_spectrum(LOG, alpha)


@dataclass(frozen=True)
class PolarData:
    """``gamma = sigma @ rho`` with ``sigma`` isometric on ``sigma_domain``."""

    rho: np.ndarray
    sigma_domain: np.ndarray
    sigma: np.ndarray


def rho(gamma) -> np.ndarray:
    """Positive part ``(gamma^* gamma)^(1/2)``."""
    s, V, _ = svd_ascending(as_matrix(gamma))
    return spectral(V, s)


def sigma(gamma) -> PolarData:
    """Polar data of ``gamma``; the isometric part vanishes on the kernel."""
    G = as_matrix(gamma)
    s, V, U = svd_ascending(G)
    keep = s > tau_gap(G)
    Vr, Ur = V[:, keep], U[:, keep]
    return PolarData(spectral(V, s), Vr @ Vr.conj().T, Ur @ Vr.conj().T)


def polar_isometry(gamma) -> np.ndarray:
    return sigma(gamma).sigma


def kappa(alpha, theta) -> np.ndarray:
    """``(alpha, theta) -> -theta Exp(alpha)``."""
    theta = as_matrix(theta)
    if theta.shape[1] != np.shape(alpha)[0]:
        raise InvalidInput("theta must have as many columns as alpha has rows")
    return -theta @ expm_h(alpha)


def kappa_inv(gamma):
    """Inverse of :func:`kappa` on injective maps: ``(log rho, -sigma)``."""
    G = as_matrix(gamma)
    s, V, U = svd_ascending(G)
    if s.size == 0 or s[0] <= tau_gap(G):
        raise NotInjective("gamma has a numerical kernel")
    return spectral(V, np.log(s)), -(U @ V.conj().T)


def pk_dim(values: np.ndarray, k: int, tau: float) -> int:
    """Dimension of the largest top-eigenspace sum of dimension at most ``k``.

    ``values`` are ascending eigenvalues and ``tau`` the equality threshold.
    """
    d = len(values)
    if not 0 <= k <= d:
        raise InvalidInput(f"k={k} out of range for dimension {d}")
    for m in range(k, -1, -1):
        if m == 0 or m == d or values[d - m] - values[d - m - 1] > tau:
            return m
    return 0


def P_k(alpha, k: int) -> np.ndarray:
    """Projector onto the largest sum of top eigenspaces of dimension at most ``k``."""
    es = hermitian_eig(alpha)
    m = pk_dim(es.values, k, tau_gap(alpha))
    F = es.vectors[:, len(es.values) - m:]
    return F @ F.conj().T


def lambda_values(values: np.ndarray, k: int, tau: float) -> np.ndarray:
    """Eigenvalues of ``lambda_k`` in the eigenbasis of ``alpha``."""
    d = len(values)
    if not 0 <= k < d:
        raise InvalidInput(f"lambda_k needs 0 <= k < {d}, got {k}")
    m = pk_dim(values, k, tau)
    lam = np.zeros(d)
    if m:
        lam[d - m:] = np.maximum(0.0, values[d - m:] - values[d - k - 1])
    return lam


def lambda_k(alpha, k: int) -> np.ndarray:
    """``max(0, alpha - e_{d-k-1}(alpha))``, supported exactly on ``P_k(alpha)``."""
    es = hermitian_eig(alpha)
    lam = lambda_values(es.values, k, tau_gap(alpha))
    return spectral(es.vectors, lam)
