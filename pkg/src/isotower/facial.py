"""Ordered-eigenvalue model spaces, facial maps and their matrix extensions.

A point of the model is an ascending float tuple or the basepoint :data:`INF`.
A facial map is an evaluator on such tuples which keeps coincident coordinates
coincident.  The package checks facialness by sampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .calculus import spectral
from .errors import FacialViolation, InvalidInput, ResolutionError
from .linalg import as_matrix, hermitian_eig, svd_ascending, tau_gap


class _Inf:
    """The point at infinity of a one-point compactification."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Inf, ())


INF = _Inf()

VARIANTS = ("plain", "positive", "positive-mod-zero", "suspension-target")

ASC_TOL = 1e-12


def is_ascending(t, tol: float = ASC_TOL) -> bool:
    t = np.asarray(t, dtype=float)
    scale = max(1.0, float(np.max(np.abs(t)))) if t.size else 1.0
    return bool(np.all(np.diff(t) >= -tol * scale))


@dataclass(frozen=True)
class DiagonalChart:
    """How to restrict a facial map to a line (or plane) and read off a circle value.

    ``embed`` sends a real parameter (or a pair of them) to an input point and
    ``read`` sends an output to a real value (or pair), or to :data:`INF`.
    """

    embed: Callable
    read: Callable
    dim: int = 1


@dataclass(frozen=True)
class FacialMapSpec:
    """A map between eigenvalue models, given by an evaluator on tuples.

    ``d_in`` is an int, or a pair ``(a, b)`` for maps out of a smash product
    whose input is a pair of tuples.  For ``suspension-target`` maps the
    evaluator returns ``(extra, tuple)`` where ``extra`` is the suspension
    coordinate.  ``positive_domain`` marks inputs with nonnegative entries;
    for ``positive-mod-zero`` an input with zero bottom entry is the basepoint.
    """

    evaluator: Callable
    d_in: object
    d_out: int
    variant: str = "plain"
    name: str = ""
    positive_domain: Optional[bool] = None
    diagonal: Optional[DiagonalChart] = field(default=None, compare=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidInput(f"unknown variant {self.variant!r}")
        if self.positive_domain is None:
            object.__setattr__(self, "positive_domain",
                               self.variant in ("positive", "positive-mod-zero"))

    @property
    def suspension(self) -> bool:
        return self.variant == "suspension-target"

    def __call__(self, t):
        if t is INF:
            return INF
        if self.variant == "positive-mod-zero" and isinstance(self.d_in, int) and t[0] <= 0:
            return INF
        out = self.evaluator(t)
        if out is INF:
            return INF
        if self.suspension:
            extra, tup = out
            if extra is INF or not math.isfinite(extra):
                return INF
            _check_out(self, t, tup)
            return float(extra), tuple(float(x) for x in tup)
        _check_out(self, t, out)
        return tuple(float(x) for x in out)


def _check_out(f: FacialMapSpec, t, out):
    if len(out) != f.d_out:
        raise FacialViolation(f"{f.name}: expected {f.d_out} outputs, got {len(out)}")
    if not is_ascending(out):
        raise FacialViolation(f"{f.name}: output {tuple(out)} not ascending at input {t}")


def identity_map(d: int, variant: str = "plain") -> FacialMapSpec:
    return FacialMapSpec(lambda t: tuple(t), d, d, variant, name="identity")


# ---------------------------------------------------------------- sampling

def sample_tuples(d: int, n: int, rng: np.random.Generator, positive: bool = False):
    """Random ascending tuples plus forced face and zero strata."""
    out = []
    for i in range(n):
        t = np.sort(rng.normal(scale=2.0, size=d))
        if positive:
            t = np.sort(np.abs(t))
        mode = i % 4
        if mode == 1 and d > 1:
            j = int(rng.integers(d - 1))
            t[j + 1] = t[j]
        elif mode == 2 and d > 1:
            t[:] = t[0]
        elif mode == 3 and positive:
            t[0] = 0.0
        out.append(tuple(np.sort(t)))
    return out


def check_facial(f: FacialMapSpec, samples: int, seed: int) -> dict:
    """Sample ``f`` and report violations of ascending output, faces and zero face.

    Only single-tuple inputs are checked; smash-product maps are checked via
    their composite with a homeomorphism onto a single model.
    """
    if samples <= 0:
        raise InvalidInput("samples must be positive")
    if not isinstance(f.d_in, int):
        raise InvalidInput("check_facial needs a map out of a single model")
    rng = np.random.default_rng(seed)
    points = sample_tuples(f.d_in, samples, rng, positive=bool(f.positive_domain))
    failures = []
    checked = 0

    def fail(kind, t, out):
        failures.append({"condition": kind, "input": list(t), "output": _jsonable(out)})

    if f(INF) is not INF:
        fail("basepoint", [], f(INF))
    for t in points:
        checked += 1
        try:
            res = f(t)
        except FacialViolation:
            fail("ascending", t, None)
            continue
        if res is INF:
            # based maps may send finite points to the basepoint
            continue
        tup = res[1] if f.suspension else res
        scale = max(1.0, max(abs(x) for x in tup))
        for i in range(len(t) - 1):
            if t[i] == t[i + 1] and abs(tup[i] - tup[i + 1]) > 1e-9 * scale:
                fail(f"face-{i}", t, tup)
                break
        if f.positive_domain and f.variant != "positive-mod-zero" and not f.suspension:
            if t[0] == 0 and abs(tup[0]) > 1e-9 * scale:
                fail("zero-face", t, tup)
    return {
        "map": f.name,
        "ok": not failures,
        "checked": checked,
        "grid": "gaussian tuples with forced single-face, all-equal and zero strata",
        "failures": failures,
    }


def _jsonable(x):
    if x is INF:
        return "INF"
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


# ---------------------------------------------------------------- quotient maps

def eta(alpha) -> tuple:
    """Ascending eigenvalue tuple."""
    return tuple(float(v) for v in hermitian_eig(alpha).values)


def nu(U, t) -> np.ndarray:
    """``U diag(t) U^*`` for a unitary ``U``."""
    if t is INF:
        raise InvalidInput("nu is undefined at the basepoint")
    U = as_matrix(U)
    return spectral(U, np.asarray(t, dtype=float))


def mu(theta, alpha) -> np.ndarray:
    """``-theta alpha`` for PSD ``alpha``."""
    alpha = as_matrix(alpha)
    es = hermitian_eig(alpha)
    if es.values.size and es.values[0] < -tau_gap(alpha):
        raise InvalidInput("mu needs a positive semidefinite operator")
    return -as_matrix(theta) @ alpha


def frak_A(f: FacialMapSpec, alpha):
    """Apply a facial map to the eigenvalues of ``alpha``.

    Returns ``(matrix, extra)`` with ``extra`` the suspension coordinate (or
    ``None``), or :data:`INF` when ``f`` sends the spectrum to the basepoint.
    """
    es = hermitian_eig(alpha)
    values = es.values
    if f.positive_domain:
        if values.size and values[0] < -tau_gap(alpha):
            raise InvalidInput("positive facial map applied to a non-PSD operator")
        values = np.clip(values, 0.0, None)
    res = f(tuple(values))
    if res is INF:
        return INF
    extra, tup = (res if f.suspension else (None, res))
    M = spectral(es.vectors, np.asarray(tup))
    return (M + M.conj().T) / 2, extra


def frak_B(f: FacialMapSpec, gamma):
    """Apply a positive facial map to the singular values of ``gamma``."""
    G = as_matrix(gamma)
    s, V, U = svd_ascending(G)
    res = f(tuple(s))
    if res is INF:
        return INF
    extra, tup = (res if f.suspension else (None, res))
    return (U * np.asarray(tup)) @ V.conj().T, extra


def hat(f2: FacialMapSpec, d: int) -> FacialMapSpec:
    """Extend a facial map on two-point tuples to ``d + 1`` points by interpolation."""

    def ev(t):
        t0, td = t[0], t[-1]
        res = f2((t0, td))
        if res is INF:
            return INF
        g, gh = res
        h = gh - g
        if td - t0 <= 0:
            return tuple(g for _ in t)
        return tuple(g + ((ti - t0) / (td - t0)) * h for ti in t)

    return FacialMapSpec(ev, d + 1, d + 1, f2.variant, name=f"hat({f2.name})",
                         positive_domain=f2.positive_domain)


# ---------------------------------------------------------------- degrees

# largest angle change between neighbouring samples accepted as resolved
MAX_STEP = math.pi / 2


def _angle(v) -> float:
    if v is INF or not math.isfinite(v):
        return math.pi
    return 2.0 * math.atan(v)


def default_chart(f: FacialMapSpec) -> DiagonalChart:
    d = f.d_in
    if f.positive_domain:
        def embed(s):
            if s > 700:
                return INF
            return tuple(math.exp(s) for _ in range(d))
    else:
        def embed(s):
            return tuple(s for _ in range(d))
    if f.suspension:
        def read(out):
            return INF if out is INF else out[0]
    elif f.positive_domain:
        def read(out):
            return INF if out is INF or out[0] <= 0 else math.log(out[0])
    else:
        def read(out):
            return INF if out is INF else out[0]
    return DiagonalChart(embed, read)


def _circle_winding(F: Callable[[float], object], n: int):
    """Winding of ``s -> angle(F(s))`` as ``s = tan(theta/2)`` runs once round.

    Returns the winding and the largest angle step between samples.
    """
    thetas = np.linspace(-math.pi, math.pi, n + 1)
    angles = []
    for th in thetas:
        if abs(abs(th) - math.pi) < 1e-15:
            angles.append(math.pi)
        else:
            angles.append(_angle(F(math.tan(th / 2))))
    inc = np.diff(np.asarray(angles))
    inc = (inc + math.pi) % (2 * math.pi) - math.pi
    return float(inc.sum() / (2 * math.pi)), float(np.max(np.abs(inc)))


def _plane_winding(F: Callable, n: int, radius: float) -> float:
    """Winding of ``F`` round ``F(0, 0)`` along the circle of the given radius."""
    base = F(0.0, 0.0)
    if base is INF:
        raise ResolutionError("plane map sends the origin to the basepoint")
    ths = np.linspace(0, 2 * math.pi, n + 1)
    angs = []
    for th in ths:
        y = F(radius * math.cos(th), radius * math.sin(th))
        if y is INF:
            raise ResolutionError("plane map hits the basepoint on the sampling circle")
        angs.append(math.atan2(y[1] - base[1], y[0] - base[0]))
    inc = np.diff(np.asarray(angs))
    inc = (inc + math.pi) % (2 * math.pi) - math.pi
    return float(inc.sum() / (2 * math.pi)), float(np.max(np.abs(inc)))


def degree_on_diagonal(f: FacialMapSpec, samples: int = 4096, doublings: int = 3,
                       radius: float = 6.0) -> int:
    """Degree of ``f`` read off from its restriction to the diagonal.

    One-parameter diagonals are compactified to a circle by ``2 atan``; the
    degree is the accumulated winding.  Two-parameter diagonals (maps out of a
    smash of two models) use the winding round the image of the origin along a
    large circle, which equals the local degree there when the origin's image
    has a single preimage.

    The sampling is accepted once every angle step is below ``MAX_STEP`` and
    the winding is within 0.01 of an integer; otherwise the sample count is
    doubled, and :class:`ResolutionError` is raised after ``doublings`` tries.
    """
    chart = f.diagonal or default_chart(f)
    n = max(4096, samples)
    for _ in range(doublings + 1):
        if chart.dim == 1:
            w, step = _circle_winding(lambda s: chart.read(f(chart.embed(s))), n)
        else:
            w, step = _plane_winding(lambda a, b: chart.read(f(chart.embed(a, b))), n, radius)
        if step < MAX_STEP and abs(w - round(w)) <= 0.01:
            return int(round(w))
        n *= 2
    raise ResolutionError(f"winding of {f.name} unresolved: {w:.4f} with angle step {step:.3g}")
