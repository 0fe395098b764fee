"""Named facial maps whose degrees are checked by the suites and the CLI."""
from __future__ import annotations

import math

from .errors import UsageError
from .facial import INF, DiagonalChart, FacialMapSpec, hat
from .ndr import h_prime, u_prime


def reflection() -> FacialMapSpec:
    return FacialMapSpec(lambda t: (-t[0],), 1, 1, "plain", name="reflection")


def identity(d: int = 1) -> FacialMapSpec:
    return FacialMapSpec(lambda t: tuple(t), d, d, "plain", name="identity")


def chi_map(d: int = 3) -> FacialMapSpec:
    """``t -> log t_0 ^ (log t_i - log t_0)`` on ``D+(d)/D0(d)``, the eigenvalue shadow of chi."""

    def ev(t):
        if t[0] <= 0:
            return INF
        l0 = math.log(t[0])
        return l0, tuple(math.log(x) - l0 for x in t)

    return FacialMapSpec(ev, d, d, "suspension-target", name="chi-g", positive_domain=True)


def unit_interval_to_line(u: float):
    """``u -> log(u / (1 - u))``; the endpoints go to the basepoint."""
    if u <= 0 or u >= 1:
        return INF
    return math.log(u / (1 - u))


def ndr_map(d: int = 3) -> FacialMapSpec:
    """``t -> u'(t_0, t_top) ^ hat(h'_0)(t)`` with the interval read as a line."""
    h0 = hat(h_prime(0.0), d - 1)

    def ev(t):
        extra = unit_interval_to_line(u_prime((t[0], t[-1])))
        if extra is INF:
            return INF
        tup = h0(tuple(t))
        if tup is INF:
            return INF
        return extra, tup

    return FacialMapSpec(ev, d, d, "suspension-target", name="ndr-f", positive_domain=True)


def _smash_chart(a: int, b: int) -> DiagonalChart:
    """Plane chart ``(s, tau) -> ((s,..), (e^tau,..))`` read back by ``(x, log(y - x))``."""

    def embed(s, tau):
        if tau > 700:
            return INF
        return (tuple(s for _ in range(a)), tuple(math.exp(tau) for _ in range(b)))

    def read(out):
        if out is INF:
            return INF
        x, y = out[a - 1], out[a]
        if y - x <= 0:
            return INF
        return x, math.log(y - x)

    return DiagonalChart(embed, read, dim=2)


def g_prime_map(d0: int = 3, k: int = 1) -> FacialMapSpec:
    """``(s, t) -> (log t_0 - exp(-s), log t)`` on ``D(d0-k) ^ D+(k)/D0(k)``."""

    def ev(st):
        s, t = st
        if t[0] <= 0:
            return INF
        l0 = math.log(t[0])
        return tuple(l0 - math.exp(-x) for x in s) + tuple(math.log(x) for x in t)

    return FacialMapSpec(ev, (d0 - k, k), d0, "plain", name="rk-gprime",
                         diagonal=_smash_chart(d0 - k, k))


def fbar_map(d0: int = 3, k: int = 1) -> FacialMapSpec:
    """``(s, t) -> (s, s_top + t)`` on ``D(d0-k) ^ D+(k)/D0(k)``."""

    def ev(st):
        s, t = st
        if t[0] <= 0:
            return INF
        return tuple(s) + tuple(s[-1] + x for x in t)

    return FacialMapSpec(ev, (d0 - k, k), d0, "plain", name="fbar",
                         diagonal=_smash_chart(d0 - k, k))


def precompose_exp(f: FacialMapSpec) -> FacialMapSpec:
    """``f`` read on the plain model through ``t -> exp(t)``."""
    if not f.positive_domain:
        raise UsageError("only maps on positive models can be pulled back along exp")
    variant = "suspension-target" if f.suspension else "plain"

    def ev(t):
        if max(t) > 700:
            return INF
        return f(tuple(math.exp(x) for x in t))

    g = FacialMapSpec(ev, f.d_in, f.d_out, variant, name=f"{f.name}*exp", positive_domain=False)
    if not f.suspension:
        def read(out):
            return INF if out is INF or out[0] <= 0 else math.log(out[0])
        g = FacialMapSpec(ev, f.d_in, f.d_out, variant, name=g.name, positive_domain=False,
                          diagonal=DiagonalChart(lambda s: tuple(s for _ in range(f.d_in)), read))
    return g


BUILTIN_MAPS = {
    "identity": lambda d=1: identity(d),
    "reflection": lambda d=1: reflection(),
    "chi-g": lambda d=3: chi_map(d),
    "ndr-f": lambda d=3: ndr_map(d),
    "rk-gprime": lambda d=3: g_prime_map(d, 1),
    "fbar": lambda d=3: fbar_map(d, 1),
}

EXPECTED_DEGREES = {"identity": 1, "reflection": -1, "chi-g": 1, "ndr-f": 1,
                    "rk-gprime": 1, "fbar": 1}


def builtin_map(name: str, d: int | None = None) -> FacialMapSpec:
    if name not in BUILTIN_MAPS:
        raise UsageError(f"unknown map {name!r}; choose from {sorted(BUILTIN_MAPS)}")
    return BUILTIN_MAPS[name]() if d is None else BUILTIN_MAPS[name](d)
