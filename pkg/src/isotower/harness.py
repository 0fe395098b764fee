"""Seeded random instances, verification suites and JSON reports."""
from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.optimize import minimize

from . import builtins as bmaps
from . import calculus as calc
from . import facial, ktheory, miller, ndr, tower
from .errors import DegenerateAlpha, FacialViolation, UsageError
from .facial import INF
from .linalg import (EQ_REL, GAP_REL, eigvals, hermitian_eig, is_projector,
                     operator_norm, rel_dev, tau_gap)

DEFAULT_D0 = (2, 3, 4, 5)
DEFAULT_D1_OFFSETS = (0, 1, 2)
DEFAULT_GROUPS = ((2,), (4,), (2, 3))
KTHEORY_GROUPS = ((1,), (2,), (3,), (4,), (2, 2), (2, 3))

DEFAULT_TOLS = {
    "eq": 1e-9,
    "roundtrip": 1e-8,
    "lipschitz": 1e-9,
    "courant_fischer": 1e-6,
    "endpoint": 1e-8,
    "growth": 10.0,
}


# ---------------------------------------------------------------- random instances

def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derive_seed(master: int, check_id: str) -> int:
    h = hashlib.sha256(f"{master}:{check_id}".encode()).digest()
    return int.from_bytes(h[:8], "little")


def complex_gaussian(rng, shape) -> np.ndarray:
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / math.sqrt(2)


def random_hermitian(d: int, seed=None) -> np.ndarray:
    """``(A + A^*)/2`` for a standard complex Gaussian ``A``."""
    if d < 1:
        raise UsageError("d must be positive")
    A = complex_gaussian(_rng(seed), (d, d))
    return (A + A.conj().T) / 2


def haar_isometry(d1: int, d0: int, seed=None) -> np.ndarray:
    """Haar-distributed ``d1 x d0`` isometry via phase-fixed QR."""
    if d1 < d0:
        raise UsageError("need d1 >= d0")
    Z = complex_gaussian(_rng(seed), (d1, d0))
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_spectrum(rng, d: int, k: Optional[int] = None, near_degenerate: bool = False):
    """Ascending spectrum; optionally with gap ``10 tau_gap`` just below the top ``k``."""
    v = np.sort(rng.normal(scale=1.5, size=d))
    if near_degenerate and k is not None and 0 < k < d:
        j = d - k
        for _ in range(2):
            gap = 10 * GAP_REL * max(1.0, float(np.max(np.abs(v))))
            v[j:] = v[j:] - (v[j] - v[j - 1]) + gap
    return v


def random_alpha(rng, d: int, k=None, near_degenerate=False) -> np.ndarray:
    U = haar_isometry(d, d, rng)
    A = calc.spectral(U, random_spectrum(rng, d, k, near_degenerate))
    return (A + A.conj().T) / 2


def random_tower_point(rng, d0, d1, k, near_degenerate=False) -> tower.TowerPoint:
    alpha = random_alpha(rng, d0, k, near_degenerate)
    return tower.make_tower_point(k, alpha, haar_isometry(d1, d0, rng))


def random_thom_point(rng, d0, d1, k, injective=True, scale=1.0) -> tower.ThomPoint:
    U = haar_isometry(d0, d0, rng)
    F, G = U[:, d0 - k:], U[:, :d0 - k]
    g = scale * complex_gaussian(rng, (d1, k))
    if not injective:
        v = complex_gaussian(rng, (k, 1))
        v = v / np.linalg.norm(v)
        g = g @ (np.eye(k) - v @ v.conj().T)
    H = random_hermitian(d0 - k, rng) if d0 > k else np.zeros((0, 0))
    psi = G @ H @ G.conj().T
    return tower.ThomPoint(k, F @ F.conj().T, g @ F.conj().T, (psi + psi.conj().T) / 2)


# ---------------------------------------------------------------- config and reports

@dataclass
class SuiteConfig:
    d0: Optional[int] = None
    d1: Optional[int] = None
    k_range: Optional[List[int]] = None
    group: Optional[List[int]] = None
    trials: int = 200
    seed: int = 0
    tol: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError("trials must be at least 1")
        if self.d0 is not None:
            d1 = self.d1 if self.d1 is not None else self.d0
            if not d1 >= self.d0 >= 1:
                raise UsageError("need d1 >= d0 >= 1")
        elif self.d1 is not None:
            raise UsageError("--d1 needs --d0")
        for name in self.tol:
            if name != "all" and name not in DEFAULT_TOLS:
                raise UsageError(f"unknown tolerance {name!r}; known: {sorted(DEFAULT_TOLS)}")

    def cells(self):
        if self.d0 is not None:
            return [(self.d0, self.d1 if self.d1 is not None else self.d0)]
        return [(a, a + o) for a in DEFAULT_D0 for o in DEFAULT_D1_OFFSETS]

    def dims(self):
        return sorted({c[0] for c in self.cells()})

    def levels(self, d0, lo=1, hi=None):
        hi = d0 - 1 if hi is None else hi
        ks = range(lo, hi + 1)
        if self.k_range:
            ks = [k for k in ks if k in self.k_range]
        return list(ks)

    def groups(self, default=DEFAULT_GROUPS):
        return [tuple(self.group)] if self.group else [tuple(g) for g in default]

    def tolerance(self, name: str) -> float:
        if "all" in self.tol:
            return self.tol["all"]
        return self.tol.get(name, DEFAULT_TOLS[name])


@dataclass
class CheckResult:
    id: str
    status: str
    metrics: dict
    witness: Optional[dict] = None


class Tracker:
    """Accumulates the worst deviation of a check and a witness for it."""

    def __init__(self, tol: float):
        self.tol = tol
        self.worst = 0.0
        self.count = 0
        self.witness = None
        self.errors = 0

    def add(self, dev: float, **info):
        self.count += 1
        if not (dev <= self.worst) or math.isnan(dev):
            self.worst = dev if not math.isnan(dev) else math.inf
            if dev > self.tol or math.isnan(dev):
                self.witness = {"deviation": _num(dev), **{k: _num(v) for k, v in info.items()}}

    def result(self, cid: str, **extra) -> CheckResult:
        ok = self.worst <= self.tol and self.errors == 0
        metrics = {"max_deviation": _num(self.worst), "tolerance": self.tol,
                   "samples": self.count, **extra}
        return CheckResult(cid, "pass" if ok else "fail", metrics, None if ok else self.witness)


def _num(x):
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x) or math.isnan(x):
            return str(x)
        return float(f"{x:.6g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


@dataclass
class Report:
    suite: str
    config: dict
    checks: List[CheckResult]
    environment: dict

    @property
    def summary(self) -> dict:
        c = {"pass": 0, "fail": 0, "skip": 0}
        for r in self.checks:
            c[r.status] += 1
        return c

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "checks": [{"id": r.id, "status": r.status, "witness": r.witness,
                        "metrics": r.metrics} for r in sorted(self.checks, key=lambda r: r.id)],
            "summary": self.summary,
            "environment": self.environment,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# ---------------------------------------------------------------- calculus checks

def check_calculus_laws(cfg: SuiteConfig, rng, dims=None) -> CheckResult:
    """Sum, product, composition and constant laws, Exp/log, polar data and the norm identity."""
    tr = Tracker(cfg.tolerance("eq"))
    for d in dims or cfg.dims():
        for _ in range(cfg.trials):
            a = random_hermitian(d, rng)
            sc = max(1.0, operator_norm(a))
            f, g = np.sin, lambda x: x ** 3 - x
            fa, ga = calc.apply_to_spectrum(f, a), calc.apply_to_spectrum(g, a)
            tr.add(operator_norm(calc.apply_to_spectrum(lambda x: f(x) + g(x), a) - fa - ga) / sc ** 3,
                   law="sum", d=d)
            tr.add(operator_norm(calc.apply_to_spectrum(lambda x: f(x) * g(x), a) - fa @ ga) / sc ** 3,
                   law="product", d=d)
            tr.add(operator_norm(calc.apply_to_spectrum(lambda x: f(g(x)), a)
                                 - calc.apply_to_spectrum(f, ga)) / sc ** 3, law="composition", d=d)
            tr.add(operator_norm(calc.apply_to_spectrum(lambda x: 0 * x + 2.5, a) - 2.5 * np.eye(d)),
                   law="constant", d=d)
            tr.add(rel_dev(a, calc.logm_h(calc.expm_h(a))), law="log-exp", d=d)
            p = calc.expm_h(a)
            tr.add(rel_dev(p, calc.expm_h(calc.logm_h(p))), law="exp-log", d=d)
            G = complex_gaussian(rng, (d + int(rng.integers(3)), d))
            if rng.uniform() < 0.3:
                G[:, 0] = 0
            pd = calc.sigma(G)
            tr.add(rel_dev(G, pd.sigma @ pd.rho), law="polar", d=d)
            tr.add(rel_dev(pd.rho @ pd.rho, G.conj().T @ G), law="rho-square", d=d)
            S = pd.sigma.conj().T @ pd.sigma
            tr.add(rel_dev(pd.sigma_domain, S), law="sigma-isometric", d=d)
            v = complex_gaussian(rng, (d,))
            tr.add(abs(np.linalg.norm(pd.rho @ v) - np.linalg.norm(G @ v)) / max(1, np.linalg.norm(G @ v)),
                   law="rho-norm", d=d)
            tr.add(abs(operator_norm(G) - eigvals(pd.rho)[-1]) / max(1, operator_norm(G)),
                   law="operator-norm", d=d)
    return tr.result("calculus.laws")


def check_lipschitz(cfg: SuiteConfig, rng, pairs=None) -> CheckResult:
    tr = Tracker(cfg.tolerance("lipschitz"))
    n = pairs or 50 * cfg.trials
    for i in range(n):
        d = 1 + int(rng.integers(6))
        a = random_hermitian(d, rng)
        b = a + (10.0 ** rng.uniform(-6, 0)) * random_hermitian(d, rng)
        excess = np.max(np.abs(eigvals(a) - eigvals(b))) - operator_norm(a - b)
        tr.add(max(0.0, excess), d=d)
    return tr.result("calculus.lipschitz")


def courant_fischer(alpha, j: int, rng, starts: int = 6) -> float:
    """``e_j`` as the max over ``(d-j)``-dimensional subspaces of the min Rayleigh quotient."""
    d = alpha.shape[0]
    m = d - j

    def objective(x):
        X = (x[: d * m] + 1j * x[d * m:]).reshape(d, m)
        Q, _ = np.linalg.qr(X)
        return -np.linalg.eigvalsh(Q.conj().T @ alpha @ Q)[0]

    best = -math.inf
    for _ in range(starts):
        x0 = rng.normal(size=2 * d * m)
        res = minimize(objective, x0, method="BFGS", options={"gtol": 1e-10})
        best = max(best, -res.fun)
    return best


def check_courant_fischer(cfg, rng) -> CheckResult:
    tr = Tracker(cfg.tolerance("courant_fischer"))
    for d in (1, 2, 3):
        for _ in range(max(2, cfg.trials // 50)):
            a = random_hermitian(d, rng)
            e = eigvals(a)
            for j in range(d):
                tr.add(abs(courant_fischer(a, j, rng) - e[j]), d=d, j=j)
    return tr.result("calculus.courant-fischer")


def check_projectors(cfg, rng) -> CheckResult:
    """Nesting of ``P_k``, projector identities, support of ``lambda_k`` and cluster stability."""
    tr = Tracker(cfg.tolerance("eq"))
    for d in cfg.dims():
        for i in range(cfg.trials):
            v = random_spectrum(rng, d)
            if i % 3 == 1:
                j = int(rng.integers(d - 1))
                v[j + 1] = v[j]
            U = haar_isometry(d, d, rng)
            a = calc.spectral(U, v)
            a = (a + a.conj().T) / 2
            prev = np.zeros((d, d))
            for k in range(d + 1):
                P = calc.P_k(a, k)
                tr.add(0.0 if is_projector(P) else 1.0, what="projector", k=k)
                tr.add(operator_norm(P @ prev - prev), what="nesting", k=k)
                prev = P
                if k < d:
                    L = calc.lambda_k(a, k)
                    tr.add(operator_norm(P @ L - L) + max(0.0, -eigvals(L)[0]), what="lambda-support", k=k)
            if i % 3 == 1:
                # a second eigenbasis inside the repeated eigenvalue
                es = hermitian_eig(a)
                vals = es.values
                V = es.vectors.copy()
                idx = np.where(np.abs(vals - v[j]) <= 1e-9)[0]
                if idx.size >= 2:
                    R = haar_isometry(idx.size, idx.size, rng)
                    V[:, idx] = V[:, idx] @ R
                    out1 = calc.spectral(es.vectors, np.exp(vals))
                    out2 = calc.spectral(V, np.exp(vals))
                    tr.add(rel_dev(out1, out2), what="cluster")
    return tr.result("calculus.projectors")


def check_kappa(cfg, rng) -> CheckResult:
    tr = Tracker(cfg.tolerance("roundtrip"))
    for d0, d1 in cfg.cells():
        for _ in range(cfg.trials):
            a = random_hermitian(d0, rng)
            th = haar_isometry(d1, d0, rng)
            a2, th2 = calc.kappa_inv(calc.kappa(a, th))
            tr.add(max(rel_dev(a, a2), rel_dev(th, th2)), d0=d0, d1=d1)
    return tr.result("calculus.kappa-roundtrip")


# ---------------------------------------------------------------- facial checks

def _facial_maps(d):
    out = [facial.identity_map(d, "positive"), ndr.h_prime(0.0), ndr.h_prime(0.37), ndr.h_prime(1.0)]
    for dd in range(1, 6):
        out.append(facial.hat(ndr.h_prime(0.0), dd))
        out.append(facial.hat(ndr.h_prime(0.6), dd))
    sq = facial.FacialMapSpec(lambda t: (t[0] ** 2, t[1] ** 2), 2, 2, "positive", name="square")
    out.append(facial.hat(sq, d))
    return out


def check_facial_maps(cfg, rng) -> CheckResult:
    fails, witness, count = 0, None, 0
    for f in _facial_maps(3):
        rep = facial.check_facial(f, max(50, cfg.trials), int(rng.integers(2 ** 31)))
        count += rep["checked"]
        if not rep["ok"]:
            fails += 1
            witness = witness or {"map": f.name, "failure": rep["failures"][0]}
    status = "pass" if fails == 0 else "fail"
    return CheckResult("facial.facial-sampling", status, {"maps_failing": fails, "samples": count},
                       witness)


def _positive_maps():
    sq = facial.FacialMapSpec(lambda t: tuple(x * x for x in t), 3, 3, "positive", name="square")
    shift = facial.FacialMapSpec(lambda t: tuple(x + 1.5 for x in t), 3, 3, "plain", name="shift")
    collapse = facial.FacialMapSpec(lambda t: tuple(t[0] for _ in t), 3, 3, "positive", name="collapse")
    return [sq, shift, collapse, facial.hat(ndr.h_prime(0.3), 2)]


def check_frak_squares(cfg, rng) -> CheckResult:
    """``eta A_f = f eta``, ``A_f nu = nu f``, ``B_f mu = mu A_f``, ``rho B_f = A_f rho`` and uniqueness."""
    tr = Tracker(cfg.tolerance("eq"))
    for f in _positive_maps():
        d = f.d_in
        for _ in range(cfg.trials):
            U = haar_isometry(d, d, rng)
            t = tuple(np.sort(np.abs(rng.normal(scale=2, size=d))))
            A = facial.nu(U, t)
            M, _ = facial.frak_A(f, A)
            ft = f(t)
            tr.add(float(np.max(np.abs(np.subtract(facial.eta(M), ft)))) / max(1, max(map(abs, ft))),
                   square="eta", map=f.name)
            tr.add(rel_dev(facial.nu(U, ft), M), square="nu", map=f.name)
            # same operator presented through a different eigenbasis
            D = np.diag(np.exp(1j * rng.uniform(0, 2 * math.pi, size=d)))
            M2, _ = facial.frak_A(f, facial.nu(U @ D, t))
            tr.add(rel_dev(M, M2), square="uniqueness", map=f.name)
            if f.positive_domain:
                th = haar_isometry(d + 1, d, rng)
                B, _ = facial.frak_B(f, facial.mu(th, A))
                tr.add(rel_dev(facial.mu(th, M), B), square="mu", map=f.name)
                tr.add(rel_dev(M, calc.rho(B)), square="rho", map=f.name)
    return tr.result("facial.squares")


def check_degrees(cfg, rng) -> CheckResult:
    got = {}
    for name, expected in bmaps.EXPECTED_DEGREES.items():
        got[name] = facial.degree_on_diagonal(bmaps.builtin_map(name))
    for d in (2, 3, 4):
        got[f"chi-g[{d}]"] = facial.degree_on_diagonal(bmaps.chi_map(d))
        got[f"ndr-f[{d}]"] = facial.degree_on_diagonal(bmaps.ndr_map(d))
        got[f"chi-g*exp[{d}]"] = facial.degree_on_diagonal(bmaps.precompose_exp(bmaps.chi_map(d)))
        got[f"ndr-f*exp[{d}]"] = facial.degree_on_diagonal(bmaps.precompose_exp(bmaps.ndr_map(d)))
    bad = {k: v for k, v in got.items()
           if v != bmaps.EXPECTED_DEGREES.get(k.split("[")[0].replace("*exp", ""), 1)}
    return CheckResult("facial.degrees", "fail" if bad else "pass", {"degrees": got},
                       {"unexpected": bad} if bad else None)


# ---------------------------------------------------------------- ndr checks

def ndr_pairs(cfg):
    pairs = [ndr.halfdisc_pair(), ndr.ndr_D2()]
    for d0, d1 in cfg.cells():
        pairs.append(ndr.ndr_hom(d0, d1))
    return pairs


def check_ndr(cfg, rng, points=None) -> List[CheckResult]:
    out = []
    n = points or max(cfg.trials, 200)
    for p in ndr_pairs(cfg):
        rep = ndr.check_ndr_axioms(p, n, int(rng.integers(2 ** 31)))
        out.append(CheckResult(f"ndr.axioms.{p.name}", "pass" if rep["ok"] else "fail",
                               {"points": rep["points"], "counts": rep["counts"],
                                "failures": rep["failures"]},
                               None if rep["ok"] else rep["witnesses"][0]))
    detected = {}
    for p in (ndr.halfdisc_pair(), ndr.ndr_D2(), ndr.ndr_hom(2, 3)):
        rep = ndr.check_ndr_axioms(ndr.with_shifted_u(p), n, int(rng.integers(2 ** 31)))
        detected[p.name] = any(w["condition"] == "zero-set" for w in rep["witnesses"])
    out.append(CheckResult("ndr.fault-injection", "pass" if all(detected.values()) else "fail",
                           {"detected": detected}))
    return out


def check_phi(cfg, rng) -> CheckResult:
    tr = Tracker(cfg.tolerance("eq"))
    for _ in range(cfg.trials):
        a, b = np.sort(rng.exponential(1.0, size=2))
        z = ndr.phi_conformal((a, b))
        tr.add(max(0.0, abs(z) - 1) + max(0.0, -z.imag), what="half-disc")
        back = ndr.phi_inverse(z)
        tr.add(abs(ndr.phi_conformal(back) - z), what="inverse")
        tr.add(abs(abs(ndr.phi_conformal((0.0, b))) - 1), what="semicircle")
        tr.add(abs(ndr.phi_conformal((a, a)).imag), what="segment")
        for s in (0.0, rng.uniform(), 1.0):
            h = ndr.h_prime(s)
            tb = (float(b), float(b))
            out = h(tb)
            if out is not INF:
                tr.add(abs(out[0] - out[1]), what="h-face")
    return tr.result("ndr.conformal")


def check_hom_equivariance(cfg, rng) -> CheckResult:
    tr = Tracker(cfg.tolerance("eq"))
    for d0, d1 in cfg.cells():
        p = ndr.ndr_hom(d0, d1)
        for _ in range(max(10, cfg.trials // 10)):
            G = complex_gaussian(rng, (d1, d0))
            A, B = haar_isometry(d1, d1, rng), haar_isometry(d0, d0, rng)
            t = rng.uniform()
            tr.add(rel_dev(A @ p.h(t, G) @ B.conj().T, p.h(t, A @ G @ B.conj().T)), d0=d0, d1=d1)
            u, h0 = ndr.cofibre_r(p, G)
            if u < 1 - ndr.COND5_MARGIN:
                tr.add(0.0 if p.membership(h0) else 1.0, what="cofibre")
    return tr.result("ndr.hom-equivariance")


# ---------------------------------------------------------------- tower checks

def check_roundtrips(cfg, rng, near_every: int = 4) -> CheckResult:
    """``r q``, ``q r``, ``g f``, ``f g``, ``tau`` and ``kappa`` round trips."""
    tr = Tracker(cfg.tolerance("roundtrip"))
    for d0, d1 in cfg.cells():
        for k in cfg.levels(d0, 1, d0):
            for i in range(cfg.trials):
                near = i % near_every == 0 and k < d0
                x = random_tower_point(rng, d0, d1, k, near)
                z = tower.q_k(x)
                y = tower.r_k(z)
                tr.add(max(rel_dev(x.alpha, y.alpha), rel_dev(x.beta, y.beta)),
                       map="r.q", d0=d0, d1=d1, k=k, near=near)
                z = random_thom_point(rng, d0, d1, k)
                z2 = tower.q_k(tower.r_k(z))
                tr.add(max(operator_norm(z.W - z2.W), rel_dev(z.gamma, z2.gamma),
                           rel_dev(z.psi, z2.psi)), map="q.r", d0=d0, d1=d1, k=k)
                x = random_tower_point(rng, d0, d1, k - 1, near)
                if not tower.in_Y_k(x.alpha, k):
                    t, z = tower.f_k(x, k)
                    y = tower.g_k(t, z)
                    tr.add(max(rel_dev(x.alpha, y.alpha), rel_dev(x.beta, y.beta)),
                           map="g.f", d0=d0, d1=d1, k=k, near=near)
                z = random_thom_point(rng, d0, d1, k, injective=False)
                t = float(rng.normal())
                t2, z2 = tower.f_k(tower.g_k(t, z), k)
                tr.add(max(abs(t - t2), operator_norm(z.W - z2.W), rel_dev(z.gamma, z2.gamma),
                           rel_dev(z.psi, z2.psi)), map="f.g", d0=d0, d1=d1, k=k)
            for i in range(cfg.trials):
                x = random_tower_point(rng, d0, d1, d0 - 1, i % near_every == 0)
                t, delta = tower.tau(x)
                y = tower.tau_inv(t, delta)
                tr.add(max(rel_dev(x.alpha, y.alpha), rel_dev(x.beta, y.beta)), map="tau", d0=d0)
                a = random_hermitian(d0, rng)
                th = haar_isometry(d1, d0, rng)
                a2, th2 = calc.kappa_inv(calc.kappa(a, th))
                tr.add(max(rel_dev(a, a2), rel_dev(th, th2)), map="kappa", d0=d0)
    return tr.result("tower.roundtrips")


def check_tower_structure(cfg, rng) -> CheckResult:
    """``P_k(r_k z) = W``, level invariants under ``pi``, and the full projection to level 0."""
    tr = Tracker(cfg.tolerance("eq"))
    for d0, d1 in cfg.cells():
        for _ in range(max(20, cfg.trials // 4)):
            k = 1 + int(rng.integers(d0))
            z = random_thom_point(rng, d0, d1, k)
            y = tower.r_k(z)
            tr.add(operator_norm(calc.P_k(y.alpha, k) - z.W), what="P_k(r_k)", k=k)
            x = random_tower_point(rng, d0, d1, d0)
            tr.add(tower.tower_invariant_deviation(x), what="invariant", level=d0)
            while x.k > 0:
                x = tower.pi_k(x)
                tr.add(tower.tower_invariant_deviation(x), what="invariant", level=x.k)
            tr.add(operator_norm(x.beta), what="level-0")
    return tr.result("tower.structure")


def check_squares(cfg, rng) -> CheckResult:
    """``tau pi = chi kappa``, ``C_g p = q g`` and ``phi_k = C_f``."""
    tr = Tracker(cfg.tolerance("eq"))
    for d0, d1 in cfg.cells():
        for _ in range(cfg.trials):
            a = random_hermitian(d0, rng)
            th = haar_isometry(d1, d0, rng)
            x = tower.make_tower_point(d0, a, th)
            t1, b1 = tower.tau(tower.pi_k(x))
            t2, b2 = tower.chi(calc.kappa(a, th))
            tr.add(max(abs(t1 - t2), rel_dev(b1, b2)), square="chi", d0=d0)
        for k in cfg.levels(d0, 1, d0 - 1):
            f = tower.third_facial_map(d0, k)
            for _ in range(cfg.trials):
                lam = haar_isometry(d0, d0, rng)
                mu_ = haar_isometry(d1, k, rng)
                s = np.sort(rng.normal(size=d0 - k))
                t = np.sort(np.abs(rng.normal(size=k)) + 0.05)
                z = tower.p_map(lam, mu_, s, t, k)
                left = tower.frak_C(f, z)
                right = tower.q_map(lam, mu_, f((tuple(s), tuple(t))), k)
                tr.add(max(rel_dev(left.alpha, right.alpha), rel_dev(left.beta, right.beta)),
                       square="C", d0=d0, k=k)
                z = random_thom_point(rng, d0, d1, k)
                p1, p2 = tower.phi_k_map(z), tower.frak_C(f, z)
                tr.add(max(rel_dev(p1.alpha, p2.alpha), rel_dev(p1.beta, p2.beta)),
                       square="phi=C_f", d0=d0, k=k)
                x = random_tower_point(rng, d0, d1, k - 1)
                dv = tower.delta_k_map(x, k)
                if dv is not INF:
                    t0, z0 = tower.f_k(x, k)
                    tr.add(max(abs(dv.t - t0), rel_dev(dv.point.gamma, z0.gamma),
                               rel_dev(dv.point.psi, z0.psi)), square="delta=f", k=k)
    return tr.result("tower.squares")


def check_charts(cfg, rng) -> CheckResult:
    tr = Tracker(cfg.tolerance("eq"))
    for d0 in cfg.dims():
        for k in cfg.levels(d0, 1, d0 - 1):
            for _ in range(max(10, cfg.trials // 10)):
                U = haar_isometry(d0, d0, rng)
                F, G = U[:, d0 - k:], U[:, :d0 - k]
                W = F @ F.conj().T
                a = G @ complex_gaussian(rng, (d0 - k, k)) @ F.conj().T
                P = tower.grassmann_chart(a, W)
                tr.add(0.0 if is_projector(P) else 1.0, what="projector")
                tr.add(abs(np.trace(P).real - k), what="trace")
                tr.add(rel_dev(a, tower.grassmann_chart_inv(P, W)), what="chart")
                al = random_hermitian(d0, rng)
                tr.add(rel_dev(al, tower.recompose_s(*tower.decompose_s(al, W))), what="decompose")
    return tr.result("tower.charts")


def _composite_top1(G):
    a, th = calc.kappa_inv(G)
    return tower.pi_k(tower.make_tower_point(G.shape[1], a, th))


def check_null_homotopies(cfg, rng, t_big: float = 1e3) -> CheckResult:
    """Endpoint agreement at ``t = 0`` and growth of the monitored quantity."""
    tr = Tracker(cfg.tolerance("endpoint"))
    growth = cfg.tolerance("growth")
    worst_ratio = math.inf
    ratio_witness = None

    def ratio(name, p, **info):
        nonlocal worst_ratio, ratio_witness
        big = tower.monitored_norm(name, tower.null_homotopy(name, t_big, p))
        small = tower.monitored_norm(name, tower.null_homotopy(name, 0.0, p))
        r = big / small if small > 0 else (math.inf if big > 0 else 0.0)
        if r < worst_ratio:
            worst_ratio = r
            ratio_witness = {"family": name, "ratio": _num(r), **info}

    for d0, d1 in cfg.cells():
        for _ in range(max(20, cfg.trials // 4)):
            G = complex_gaussian(rng, (d1, d0))
            y, c = tower.null_homotopy("top-1", 0.0, G), _composite_top1(G)
            tr.add(max(rel_dev(c.alpha, y.alpha), rel_dev(c.beta, y.beta)), family="top-1")
            ratio("top-1", G, d0=d0)
            x = random_tower_point(rng, d0, d1, d0)
            t0, b0 = tower.null_homotopy("top-2", 0.0, x)
            t1, b1 = tower.tau(tower.pi_k(x))
            tr.add(max(abs(t0 - t1), rel_dev(b1, b0)), family="top-2")
            ratio("top-2", x, d0=d0)
            for k in cfg.levels(d0, 1, d0 - 1):
                z = random_thom_point(rng, d0, d1, k)
                y, c = tower.null_homotopy("mid-1", 0.0, z), tower.pi_k(tower.phi_k_map(z))
                tr.add(max(rel_dev(c.alpha, y.alpha), rel_dev(c.beta, y.beta)), family="mid-1", k=k)
                ratio("mid-1", z, d0=d0, k=k)
                x = random_tower_point(rng, d0, d1, k)
                t0, z0 = tower.null_homotopy("mid-2", 0.0, x)
                dv = tower.delta_k_map(tower.pi_k(x), k)
                tr.add(max(abs(t0 - dv.t), rel_dev(dv.point.gamma, z0.gamma),
                           rel_dev(dv.point.psi, z0.psi), operator_norm(dv.point.W - z0.W)),
                       family="mid-2", k=k)
                ratio("mid-2", x, d0=d0, k=k)
                x = random_tower_point(rng, d0, d1, k - 1)
                t0, y0 = tower.null_homotopy("mid-3", 0.0, x, k)
                dv = tower.delta_k_map(x, k)
                c = tower.phi_k_map(dv.point)
                tr.add(max(abs(t0 - dv.t), rel_dev(c.alpha, y0.alpha), rel_dev(c.beta, y0.beta)),
                       family="mid-3", k=k)
                ratio("mid-3", x, d0=d0, k=k)
                if k < d0:
                    z = random_thom_point(rng, d0, d1, k)
                    h0, h1 = miller.g0_g1_homotopy(0.0, z), miller.g0_g1_homotopy(1.0, z)
                    tr.add(max(rel_dev(miller.g0_prime(z), h0), rel_dev(miller.g1_prime(z), h1)),
                           family="g0-g1", k=k)
    res = tr.result("tower.null-homotopies", min_growth_ratio=_num(worst_ratio), growth_required=growth)
    if worst_ratio < growth:
        res.status = "fail"
        res.witness = ratio_witness
    return res


def _point_dev(a, b) -> float:
    if a is INF or b is INF:
        return 0.0 if a is b else math.inf
    if isinstance(a, tower.TowerPoint):
        return max(rel_dev(a.alpha, b.alpha), rel_dev(a.beta, b.beta))
    if isinstance(a, tower.ThomPoint):
        return max(operator_norm(a.W - b.W), rel_dev(a.gamma, b.gamma), rel_dev(a.psi, b.psi))
    if isinstance(a, tower.DeltaValue):
        return max(abs(a.t - b.t), _point_dev(a.point, b.point))
    if isinstance(a, miller.FiltrationPoint):
        return rel_dev(a.phi, b.phi)
    if isinstance(a, tuple):
        return max(_point_dev(x, y) for x, y in zip(a, b))
    if isinstance(a, (float, int)):
        return abs(a - b)
    return rel_dev(a, b)


def random_characters(rng, orders, n):
    return tuple(tuple(int(rng.integers(m)) for m in orders) for _ in range(n))


def equivariance_cases(d0, d1, k):
    """``(name, sampler, map, input kind)`` for every map checked for equivariance."""
    cases = [
        ("q_k", lambda r: random_tower_point(r, d0, d1, k), tower.q_k),
        ("r_k", lambda r: random_thom_point(r, d0, d1, k), tower.r_k),
        ("f_k", lambda r: random_tower_point(r, d0, d1, k - 1), lambda x: tower.f_k(x, k)),
        ("g_k", lambda r: (float(r.normal()), random_thom_point(r, d0, d1, k, False)),
         lambda a: tower.g_k(*a)),
        ("pi_k", lambda r: random_tower_point(r, d0, d1, k), tower.pi_k),
        ("phi_k", lambda r: random_thom_point(r, d0, d1, k), tower.phi_k_map),
        ("delta_k", lambda r: random_tower_point(r, d0, d1, k - 1), lambda x: tower.delta_k_map(x, k)),
        ("C_f", lambda r: random_thom_point(r, d0, d1, k),
         lambda z: tower.frak_C(tower.third_facial_map(d0, k), z)),
        ("tau", lambda r: random_tower_point(r, d0, d1, d0 - 1), tower.tau),
        ("chi", lambda r: complex_gaussian(r, (d1, d0)), tower.chi),
        ("kappa_inv", lambda r: complex_gaussian(r, (d1, d0)), lambda g: calc.kappa_inv(g)),
        ("top-1", lambda r: complex_gaussian(r, (d1, d0)), lambda g: tower.null_homotopy("top-1", 0.7, g)),
        ("top-2", lambda r: random_tower_point(r, d0, d1, d0),
         lambda x: tower.null_homotopy("top-2", 0.7, x)),
        ("mid-1", lambda r: random_thom_point(r, d0, d1, k), lambda z: tower.null_homotopy("mid-1", 0.7, z)),
        ("mid-2", lambda r: random_tower_point(r, d0, d1, k), lambda x: tower.null_homotopy("mid-2", 0.7, x)),
        ("mid-3", lambda r: random_tower_point(r, d0, d1, k - 1),
         lambda x: tower.null_homotopy("mid-3", 0.7, x, k)),
        ("g0-g1", lambda r: random_thom_point(r, d0, d1, k), lambda z: miller.g0_g1_homotopy(0.4, z)),
        ("res_k", lambda r: (random_alpha(r, d0), random_filtration_point(r, d0, d1, k)),
         lambda a: miller.res_k_map(a[0], a[1], k)),
        ("res_k_inv", lambda r: random_tower_point(r, d0, d1, k), miller.res_k_inverse_on_B),
    ]
    return cases


def random_filtration_point(rng, d0, d1, k, with_support=False):
    """Isometry equal to the inclusion off a random ``k``-dimensional subspace ``F``."""
    U = haar_isometry(d0, d0, rng)
    F, Fc = U[:, :k], U[:, k:]
    rest = miller.inclusion(d1, d0) @ Fc
    w, Vp = np.linalg.eigh(np.eye(d1) - rest @ rest.conj().T)
    basis = Vp[:, w > 0.5]
    R = haar_isometry(basis.shape[1], k, rng)
    p = miller.FiltrationPoint(basis @ R @ F.conj().T + rest @ Fc.conj().T)
    return (p, F @ F.conj().T) if with_support else p


def _act_input(g, x, action):
    if isinstance(x, tuple) and len(x) == 2 and isinstance(x[1], miller.FiltrationPoint):
        D0, D1 = action.matrices(g)
        return (D0 @ x[0] @ D0.conj().T, miller.FiltrationPoint(D1 @ x[1].phi @ D0.conj().T))
    return tower.act(g, x, action)


def _act_output(g, y, action):
    if isinstance(y, miller.FiltrationPoint):
        D0, D1 = action.matrices(g)
        return miller.FiltrationPoint(D1 @ y.phi @ D0.conj().T)
    if isinstance(y, np.ndarray) and y.shape[0] == y.shape[1] and np.allclose(y, y.conj().T) \
            and y.shape[0] == action_d0(action):
        return tower.act(g, y, action, "s")
    if isinstance(y, tuple) and len(y) == 2 and isinstance(y[0], np.ndarray):
        # (alpha, theta) from kappa_inv
        return (tower.act(g, y[0], action, "s"), tower.act(g, y[1], action))
    return tower.act(g, y, action)


def action_d0(action):
    return len(action.chars_v0)


def check_equivariance(cfg, rng, trials=None, groups=None) -> CheckResult:
    """Every tower and filtration map commutes with the group action, ``trials`` draws per map and group."""
    tr = Tracker(cfg.tolerance("eq"))
    n = trials or max(10, cfg.trials // 2)
    cells = [(d0, d1) for d0, d1 in cfg.cells() if cfg.levels(d0, 1, d0 - 1)]
    if not cells:
        return CheckResult("tower.equivariance", "skip", {"reason": "no level 1 <= k < d0 in range"})
    names = [c[0] for c in equivariance_cases(2, 2, 1)]
    per_map = {}
    for orders in groups or cfg.groups():
        for idx, name in enumerate(names):
            done = 0
            while done < n:
                d0, d1 = cells[int(rng.integers(len(cells)))]
                ks = cfg.levels(d0, 1, d0 - 1)
                k = ks[int(rng.integers(len(ks)))]
                _, sampler, fn = equivariance_cases(d0, d1, k)[idx]
                c0 = random_characters(rng, orders, d0)
                c1 = c0 + random_characters(rng, orders, d1 - d0)
                action = tower.GroupAction(tuple(orders), c0, c1)
                g = tuple(int(rng.integers(m)) for m in orders)
                x = sampler(rng)
                try:
                    lhs = fn(_act_input(g, x, action))
                    rhs = _act_output(g, fn(x), action)
                except DegenerateAlpha:
                    continue
                done += 1
                dev = _point_dev(rhs, lhs)
                per_map[name] = max(per_map.get(name, 0.0), dev)
                tr.add(dev, map=name, group=str(list(orders)), d0=d0, d1=d1, k=k)
    return tr.result("tower.equivariance", per_map={k: _num(v) for k, v in sorted(per_map.items())})


def check_group_action(cfg, rng) -> CheckResult:
    tr = Tracker(cfg.tolerance("eq"))
    for orders in cfg.groups():
        action = tower.GroupAction(tuple(orders), random_characters(rng, orders, 3),
                                   random_characters(rng, orders, 4))
        for _ in range(20):
            g = tuple(int(rng.integers(m)) for m in orders)
            h = tuple(int(rng.integers(m)) for m in orders)
            x = random_tower_point(rng, 3, 4, 2)
            a = tower.act(action.compose(g, h), x, action)
            b = tower.act(g, tower.act(h, x, action), action)
            tr.add(_point_dev(a, b), what="composition")
            e = tower.act(tuple(0 for _ in orders), x, action)
            tr.add(_point_dev(x, e), what="identity")
    return tr.result("tower.group-action")


def check_tower_degrees(cfg, rng) -> CheckResult:
    got = {}
    for d0 in sorted(set(cfg.dims()) | {2, 3}):
        for k in range(1, d0):
            got[f"rk-gprime[{d0},{k}]"] = facial.degree_on_diagonal(bmaps.g_prime_map(d0, k))
            got[f"fbar[{d0},{k}]"] = facial.degree_on_diagonal(bmaps.fbar_map(d0, k))
    bad = {k: v for k, v in got.items() if v != 1}
    return CheckResult("tower.degrees", "fail" if bad else "pass", {"degrees": got},
                       {"unexpected": bad} if bad else None)


# ---------------------------------------------------------------- miller checks

def check_cayley(cfg, rng) -> CheckResult:
    tr = Tracker(cfg.tolerance("eq"))
    for d in cfg.dims():
        for _ in range(cfg.trials):
            dl = random_hermitian(d, rng)
            C = miller.cayley(dl)
            tr.add(operator_norm(C.conj().T @ C - np.eye(d)), what="unitary")
            tr.add(rel_dev(dl, miller.cayley_inv(C)), what="roundtrip")
    return tr.result("miller.cayley")


def check_res_inverse(cfg, rng, dims=None, samples=None) -> CheckResult:
    """Isometry, filtration rank and round trip of the chart-B inverse of ``res_k``.

    ``samples`` chart-B points are collected for every ``(d0, k)``; ``d1`` cycles
    through ``d0 + {0, 1, 2}``.
    """
    tr = Tracker(cfg.tolerance("roundtrip"))
    n = samples or cfg.trials
    dlist = dims or cfg.dims()
    counts = {}
    for d0 in dlist:
        d1s = [cfg.d1] if (cfg.d0 == d0 and cfg.d1 is not None) else [d0 + o for o in DEFAULT_D1_OFFSETS]
        for k in cfg.levels(d0, 1, d0 - 1):
            got, attempts = 0, 0
            while got < n and attempts < 50 * n:
                attempts += 1
                d1 = d1s[attempts % len(d1s)]
                x = random_tower_point(rng, d0, d1, k)
                if not miller.in_chart_B(x):
                    continue
                got += 1
                p = miller.res_k_inverse_on_B(x)
                tr.add(operator_norm(p.phi.conj().T @ p.phi - np.eye(d0)), what="isometry", d0=d0, k=k)
                lvl = miller.filtration_level(p)
                tr.add(0.0 if lvl <= k else 1.0, what="rank", level=lvl, k=k)
                y = miller.res_k_map(x.alpha, p, k)
                tr.add(max(rel_dev(x.alpha, y.alpha), rel_dev(x.beta, y.beta)), what="roundtrip", k=k)
                tr.add(0.0 if miller.in_chart_A(x.alpha, p, k) else 1.0, what="chart-A")
            counts[f"{d0},{k}"] = got
            if got < n:
                tr.errors += 1
    return tr.result("miller.res-inverse", chart_B_samples=counts)


def check_miller_misc(cfg, rng) -> CheckResult:
    """``res_k`` lands in level ``k`` compatibly with ``pi``, chart A iff chart B, Gamma round trips."""
    tr = Tracker(cfg.tolerance("eq"))
    for d0, d1 in cfg.cells():
        for k in cfg.levels(d0, 1, d0 - 1):
            for _ in range(max(10, cfg.trials // 10)):
                p, W = random_filtration_point(rng, d0, d1, k, with_support=True)
                tr.add(0.0 if miller.filtration_level(p) <= k else 1.0, what="level")
                a = random_alpha(rng, d0)
                x = miller.res_k_map(a, p, k)
                tr.add(tower.tower_invariant_deviation(x), what="res-invariant")
                es = hermitian_eig(a)
                lower = -p.phi @ calc.spectral(es.vectors, calc.lambda_values(es.values, k - 1, tau_gap(a)))
                tr.add(rel_dev(tower.pi_k(x).beta, lower), what="pi-compat", k=k)
                tr.add(0.0 if miller.in_chart_A(a, p, k) == miller.in_chart_B(x) else 1.0,
                       what="chart-equivalence")
                M = miller.gamma_diffeo(W, p.phi)
                tr.add(rel_dev(p.phi, miller.gamma_diffeo_inv(W, M)), what="gamma")
    return tr.result("miller.filtration")


def check_derivative(cfg, rng, h: float = 1e-4) -> CheckResult:
    devs = {}
    ok = True
    for d in (1, 2, 3):
        rep = miller.top_splitting_derivative_check(h, d)
        devs[str(d)] = _num(rep["max_deviation"])
        ok = ok and rep["ok"]
    half = miller.top_splitting_derivative_check(h / 2, 2)["max_deviation"]
    full = miller.top_splitting_derivative_check(h, 2)["max_deviation"]
    conv = full / half if half > 0 else math.inf
    ok = ok and conv >= 2.0
    return CheckResult("miller.derivative", "pass" if ok else "fail",
                       {"h": h, "max_deviation": devs, "halving_ratio": _num(conv)},
                       None if ok else {"max_deviation": devs, "halving_ratio": _num(conv)})


# ---------------------------------------------------------------- ktheory checks

def _groups_for_kt(cfg):
    return [ktheory.GroupSpec(tuple(g)) for g in cfg.groups(KTHEORY_GROUPS)]


def check_kt_polys(cfg, rng) -> CheckResult:
    n, bad = 0, None
    for G in _groups_for_kt(cfg):
        reps = [r for d in range(0, 4) for r in ktheory.representations(G, d)]
        for V in reps:
            n += 1
            if ktheory.f_V(V) != ktheory.f_V_product(V):
                bad = bad or {"group": list(G.orders), "v": [list(c) for c in V.chars]}
        small = [r for r in reps if r.dim <= 2]
        for V, W in itertools.product(small, reps):
            n += 1
            if not ktheory.f_product_check(V, W):
                bad = bad or {"group": list(G.orders), "v": [list(c) for c in V.chars],
                              "w": [list(c) for c in W.chars]}
    return CheckResult("ktheory.polynomials", "fail" if bad else "pass", {"cases": n}, bad)


def residue_grid(groups=KTHEORY_GROUPS):
    """Every ``(V0, V1)`` with ``dim V0 <= 2``, ``dim V1 <= 3`` and their monomial residues."""
    for orders in groups:
        G = ktheory.GroupSpec(tuple(orders))
        for d0 in (1, 2):
            for V0 in ktheory.representations(G, d0):
                for d1 in range(d0, 4):
                    for V1 in ktheory.representations(G, d1):
                        res = [ktheory.residue(ktheory.RepPoly.monomial(G, j), V0, V1)
                               for j in range(d0 + 2)]
                        yield G, V0, V1, res


def _rep_json(V):
    return [list(c) for c in V.chars]


def check_kt_residue(cfg, rng) -> List[CheckResult]:
    """Subreps force vanishing residues; the converse is checked separately and can fail."""
    n = 0
    forward_bad, converse_bad = [], []
    for G, V0, V1, res in residue_grid(cfg.groups(KTHEORY_GROUPS)):
        n += 1
        vanish = all(r.is_zero() for r in res)
        sub = ktheory.is_subrep(V0, V1)
        case = {"group": list(G.orders), "v0": _rep_json(V0), "v1": _rep_json(V1)}
        if sub and not vanish:
            forward_bad.append(case)
        if vanish and not sub:
            converse_bad.append(case)
    linear_bad = None
    for orders in cfg.groups(KTHEORY_GROUPS):
        G = ktheory.GroupSpec(tuple(orders))
        reps = [ktheory.representations(G, d) for d in (1, 2, 3)]
        for _ in range(10):
            V0 = reps[0][int(rng.integers(len(reps[0])))]
            V1 = reps[2][int(rng.integers(len(reps[2])))]
            a = ktheory.RepElement(G, {c: int(rng.integers(-3, 4)) for c in G.chars()})
            g = ktheory.RepPoly(G, {j: ktheory.RepElement(G, {c: int(rng.integers(-2, 3)) for c in G.chars()})
                                    for j in range(-1, 3)})
            if ktheory.residue(g * a, V0, V1) != ktheory.residue(g, V0, V1) * a:
                linear_bad = linear_bad or {"group": list(G.orders), "v0": _rep_json(V0), "v1": _rep_json(V1)}
    conv = ktheory.RESIDUE_CONVENTION
    return [
        CheckResult("ktheory.residue-linear", "fail" if linear_bad else "pass",
                    {"convention": conv}, linear_bad),
        CheckResult("ktheory.residue-subrep-vanishes", "fail" if forward_bad else "pass",
                    {"cases": n, "convention": conv}, {"cases": forward_bad} if forward_bad else None),
        CheckResult("ktheory.residue-vanishing-implies-subrep", "fail" if converse_bad else "pass",
                    {"cases": n, "counterexamples": len(converse_bad), "convention": conv},
                    {"cases": converse_bad} if converse_bad else None),
    ]


def check_kt_koszul(cfg, rng) -> CheckResult:
    n, bad = 0, None
    for G in _groups_for_kt(cfg):
        for r in range(0, 4):
            for _ in range(5):
                xs = [ktheory.RepElement(G, {c: int(rng.integers(-3, 4)) for c in G.chars()})
                      for _ in range(r)]
                K = ktheory.koszul_build(xs, G)
                n += 1
                if not K.d_squared_zero():
                    bad = bad or {"group": list(G.orders), "rank": r}
        for V0 in ktheory.representations(G, 1) + ktheory.representations(G, 2)[:6]:
            for V1 in ktheory.representations(G, 2)[:8]:
                K, rep = ktheory.tower_koszul(V0, V1)
                n += 1
                if not (rep["consistent"] and rep["d_squared_zero"]):
                    bad = bad or {"group": list(G.orders), "report": rep}
    return CheckResult("ktheory.koszul", "fail" if bad else "pass", {"complexes": n}, bad)


def kernel_cases(groups=KTHEORY_GROUPS, max_size_full: int = 4):
    """Small cases for the restriction-kernel lattice check."""
    out = []
    for orders in groups:
        G = ktheory.GroupSpec(tuple(orders))
        for d0 in (0, 1, 2):
            for d1 in range(max(d0, 1), 4):
                V0s = ktheory.representations(G, d0)
                V1s = ktheory.representations(G, d1)
                pairs = list(itertools.product(V0s, V1s))
                if G.size > max_size_full:
                    pairs = pairs[:: max(1, len(pairs) // 12)]
                out.extend(pairs)
    return out


def check_kt_kernel(cfg, rng) -> CheckResult:
    n, bad = 0, None
    for V0, V1 in kernel_cases(cfg.groups(KTHEORY_GROUPS)):
        rep = ktheory.restriction_kernel_check(V0, V1)
        n += 1
        if not rep["match"] or rep["kernel_rank"] != rep["expected_rank"]:
            bad = bad or rep
    return CheckResult("ktheory.restriction-kernel", "fail" if bad else "pass", {"cases": n}, bad)


# ---------------------------------------------------------------- suites

def _flatten(x):
    return x if isinstance(x, list) else [x]


SUITES: Dict[str, List[Callable]] = {
    "calculus": [check_calculus_laws, check_lipschitz, check_courant_fischer, check_projectors, check_kappa],
    "facial": [check_facial_maps, check_frak_squares, check_degrees],
    "ndr": [check_ndr, check_phi, check_hom_equivariance],
    "tower": [check_roundtrips, check_tower_structure, check_squares, check_charts,
              check_null_homotopies, check_equivariance, check_group_action, check_tower_degrees],
    "miller": [check_cayley, check_res_inverse, check_miller_misc, check_derivative],
    "ktheory": [check_kt_polys, check_kt_residue, check_kt_koszul, check_kt_kernel],
}


def run_suite(name: str, cfg: SuiteConfig) -> Report:
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise UsageError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    checks: List[CheckResult] = []
    for n in names:
        for fn in SUITES[n]:
            cid = f"{n}.{fn.__name__}"
            rng = np.random.default_rng(derive_seed(cfg.seed, cid))
            try:
                checks.extend(_flatten(fn(cfg, rng)))
            except (FacialViolation, ValueError, ArithmeticError) as exc:
                checks.append(CheckResult(cid, "fail", {}, {"error": f"{type(exc).__name__}: {exc}"}))
    env = {"seed": cfg.seed, "residue_convention": ktheory.RESIDUE_CONVENTION,
           "tau_gap_rel": GAP_REL, "tol_eq_rel": EQ_REL}
    return Report(name, asdict(cfg), checks, env)
