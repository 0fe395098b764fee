"""Neighbourhood-deformation-retract data for the half disc, D+(2) and injective maps."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidInput
from .facial import INF, FacialMapSpec, frak_B, hat
from .linalg import as_matrix, operator_norm, svd_ascending, tau_gap

DISC_TOL = 1e-12
COND5_MARGIN = 1e-6


@dataclass(frozen=True)
class NdrPair:
    """Data ``(u, h)`` exhibiting a subspace ``A`` as an NDR.

    ``dist`` measures how far apart two points are relative to their size and
    ``u_zero_tol(x)`` is the threshold under which ``u(x)`` counts as zero.
    """

    name: str
    u: Callable
    h: Callable
    membership: Callable
    sampler: Callable
    dist: Callable
    u_zero_tol: Callable = lambda x: 1e-12
    same_tol: float = 1e-8


def _check_disc(z):
    z = complex(z)
    if abs(z) > 1 + DISC_TOL or z.imag < -DISC_TOL:
        raise InvalidInput(f"{z} is outside the closed upper half disc")
    return z


def halfdisc_u(z) -> float:
    z = _check_disc(z)
    return min(1.0, 2.0 - 2.0 * min(1.0, abs(z)))


def halfdisc_h(t: float, z) -> complex:
    z = _check_disc(z)
    if not 0 <= t <= 1:
        raise InvalidInput("time must lie in [0, 1]")
    r = abs(z)
    if r == 0:
        return 0j
    return min(1.0, (2.0 - t) * r) * (z / r)


def phi_conformal(t) -> complex:
    """Conformal identification of D+(2) with the closed upper half disc."""
    if t is INF:
        return -1 + 0j
    t0, t1 = float(t[0]), float(t[1])
    w = complex(t1, t0) ** 2
    return (1j - w) / (1j + w)


def phi_inverse(z):
    z = complex(z)
    if abs(z + 1) <= 1e-14:
        return INF
    w = 1j * (1 - z) / (1 + z)
    r = cmath.sqrt(w)
    a, b = max(0.0, r.imag), max(0.0, r.real)
    return (min(a, b), max(a, b))


def _tuple_dist(a, b) -> float:
    if a is INF or b is INF:
        return 0.0 if a is b else math.inf
    return float(np.max(np.abs(np.subtract(a, b)))) / max(1.0, float(np.max(np.abs(a))))


def halfdisc_pair() -> NdrPair:
    def sampler(n, rng):
        pts = []
        for i in range(n):
            mode = i % 5
            th = rng.uniform(0, math.pi)
            if mode == 0:
                pts.append(cmath.exp(1j * th))
            elif mode == 1:
                pts.append(0.5 * cmath.exp(1j * th))
            elif mode == 2:
                pts.append(complex(rng.uniform(-1, 1), 0))
            else:
                pts.append(math.sqrt(rng.uniform(0, 1)) * cmath.exp(1j * th))
        pts.extend([0j, 1 + 0j, -1 + 0j, 1j])
        return pts

    return NdrPair(
        "halfdisc", halfdisc_u, halfdisc_h,
        membership=lambda z: abs(abs(z) - 1) <= DISC_TOL,
        sampler=sampler,
        dist=lambda a, b: abs(a - b),
    )


def _u2(t) -> float:
    return halfdisc_u(_clip_disc(phi_conformal(t)))


def _clip_disc(z):
    # rounding can push phi just past the unit circle or below the real axis
    if abs(z) > 1:
        z = z / abs(z)
    if z.imag < 0:
        z = complex(z.real, 0.0)
    return z


def _h2(s: float, t):
    if t is INF:
        return INF
    return phi_inverse(halfdisc_h(s, _clip_disc(phi_conformal(t))))


def h_prime(s: float) -> FacialMapSpec:
    """The retraction homotopy on D+(2) at time ``s`` as a positive facial map."""
    return FacialMapSpec(lambda t: _h2(s, t), 2, 2, "positive", name=f"h'_{s}")


def ndr_D2() -> NdrPair:
    def sampler(n, rng):
        pts = []
        for i in range(n):
            mode = i % 5
            a, b = np.sort(rng.exponential(1.5, size=2))
            a = max(a, 1e-3 * max(b, 1.0))
            if mode == 0:
                a = 0.0
            elif mode == 1:
                a = b = max(a, b)
            pts.append((float(min(a, b)), float(max(a, b))))
        pts.extend([(0.0, 0.0), INF, (1.0, 1.0), (0.0, 1.0)])
        return pts

    return NdrPair(
        "D+(2)",
        u=lambda t: 0.0 if t is INF else _u2(t),
        h=_h2,
        membership=lambda t: t is INF or t[0] <= DISC_TOL * max(1.0, t[1]),
        sampler=sampler,
        dist=_tuple_dist,
    )


def u_prime(t) -> float:
    return 0.0 if t is INF else _u2(t)


def ndr_hom(d0: int, d1: int) -> NdrPair:
    """NDR exhibiting non-injective ``d1 x d0`` maps inside all maps."""
    if not d1 >= d0 >= 1:
        raise InvalidInput("ndr_hom needs d1 >= d0 >= 1")

    def extremes(gamma):
        s, _, _ = svd_ascending(gamma)
        return s[0], s[-1]

    # the space is compactified by INF, which lies in A
    def u(gamma):
        if gamma is INF:
            return 0.0
        s0, st = extremes(as_matrix(gamma))
        return _u2((s0, st))

    def h(t, gamma):
        if gamma is INF:
            return INF
        out = frak_B(hat(h_prime(t), d0 - 1), as_matrix(gamma))
        return INF if out is INF else out[0]

    def member(gamma):
        if gamma is INF:
            return True
        s0, _ = extremes(as_matrix(gamma))
        return bool(s0 <= tau_gap(gamma))

    def dist(a, b):
        if a is INF or b is INF:
            return 0.0 if a is b else math.inf
        return operator_norm(a - b) / max(1.0, operator_norm(a))

    def sampler(n, rng):
        pts = []
        for i in range(n):
            G = (rng.normal(size=(d1, d0)) + 1j * rng.normal(size=(d1, d0))) / math.sqrt(2)
            mode = i % 5
            if mode == 0:
                drop = 1 + int(rng.integers(min(d0, 2)))
                U, s, Vh = np.linalg.svd(G, full_matrices=False)
                s[-drop:] = 0.0
                G = (U * s) @ Vh
            elif mode == 1:
                G = 0.05 * G
            elif mode == 2:
                G = 3.0 * G
            pts.append(G)
        pts.append(np.zeros((d1, d0), dtype=complex))
        pts.append(INF)
        return pts

    return NdrPair(
        f"hom({d0},{d1})", u, h, member, sampler,
        dist=dist,
        u_zero_tol=lambda g: 0.0 if g is INF else 10 * tau_gap(g),
    )


def check_ndr_axioms(p: NdrPair, trials: int, seed: int) -> dict:
    """Sample the NDR conditions and collect failures with witnesses.

    Conditions: ``h_1 = id``; ``h_t`` fixes ``A``; ``u < 1`` sends ``h_0``
    into ``A``; ``u = 0`` exactly on ``A``.
    """
    if trials <= 0:
        raise InvalidInput("trials must be positive")
    rng = np.random.default_rng(seed)
    points = p.sampler(trials, rng)
    counts = {"h1-identity": 0, "fixes-A": 0, "retracts-into-A": 0, "zero-set": 0, "u-range": 0}
    failures = []

    def fail(cond, x, **info):
        if len(failures) < 20:
            failures.append({"condition": cond, "point": _witness(x), **info})

    n_fail = 0
    for x in points:
        ux = p.u(x)
        member = p.membership(x)
        counts["u-range"] += 1
        if not -1e-12 <= ux <= 1 + 1e-12:
            n_fail += 1
            fail("u-range", x, u=ux)
        counts["h1-identity"] += 1
        d = p.dist(x, p.h(1.0, x))
        if d > p.same_tol:
            n_fail += 1
            fail("h1-identity", x, deviation=d)
        if member:
            for t in (0.0, float(rng.uniform()), 0.5):
                counts["fixes-A"] += 1
                d = p.dist(x, p.h(t, x))
                if d > p.same_tol:
                    n_fail += 1
                    fail("fixes-A", x, t=t, deviation=d)
        if ux < 1 - COND5_MARGIN:
            counts["retracts-into-A"] += 1
            if not p.membership(p.h(0.0, x)):
                n_fail += 1
                fail("retracts-into-A", x, u=ux)
        counts["zero-set"] += 1
        if (abs(ux) <= p.u_zero_tol(x)) != member:
            n_fail += 1
            fail("zero-set", x, u=ux, member=member)
    return {"pair": p.name, "ok": n_fail == 0, "points": len(points), "counts": counts,
            "failures": n_fail, "witnesses": failures}


def _witness(x):
    if x is INF:
        return "INF"
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.ndarray):
        return {"shape": list(x.shape), "norm": float(np.linalg.norm(x))}
    return list(x) if isinstance(x, tuple) else x


def with_shifted_u(p: NdrPair, shift: float = 0.1) -> NdrPair:
    """Fault injection: the same pair with ``u`` raised by ``shift``."""
    return NdrPair(p.name + f"+u{shift}", lambda x: min(1.0, p.u(x) + shift), p.h,
                   p.membership, p.sampler, p.dist, p.u_zero_tol, p.same_tol)


def cofibre_r(p: NdrPair, x):
    """``x -> (u(x), h_0(x))``."""
    return p.u(x), p.h(0.0, x)
