"""Exact representation-ring arithmetic for finite abelian groups.

``G`` is a product of cyclic groups ``Z/n_1 x ... x Z/n_r``; its characters
are tuples ``c`` with ``c_i`` taken mod ``n_i``, and ``R(G)`` is the group
ring on the character group.  Everything here is integer arithmetic.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

from .errors import InvalidInput, NotInvertible, TooLarge

RESIDUE_CONVENTION = "dT"

Char = Tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    orders: Tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if not orders or any(n < 1 for n in orders):
            raise InvalidInput("orders must be positive integers")
        object.__setattr__(self, "orders", orders)

    @property
    def size(self) -> int:
        p = 1
        for n in self.orders:
            p *= n
        return p

    def chars(self) -> List[Char]:
        return list(itertools.product(*[range(n) for n in self.orders]))

    def norm(self, c) -> Char:
        c = tuple(int(x) for x in c)
        if len(c) != len(self.orders):
            raise InvalidInput(f"character {c} does not match group orders {self.orders}")
        return tuple(x % n for x, n in zip(c, self.orders))

    def mul(self, a: Char, b: Char) -> Char:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def inv(self, a: Char) -> Char:
        return tuple((-x) % n for x, n in zip(a, self.orders))

    @property
    def trivial(self) -> Char:
        return tuple(0 for _ in self.orders)


class RepElement:
    """An integer combination of characters."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: GroupSpec, coeffs: Dict[Char, int] | None = None):
        self.group = group
        clean = {}
        for c, v in (coeffs or {}).items():
            if v:
                c = group.norm(c)
                clean[c] = clean.get(c, 0) + int(v)
        self.coeffs = {c: v for c, v in clean.items() if v}

    @classmethod
    def char(cls, group, c, n: int = 1):
        return cls(group, {tuple(c): n})

    @classmethod
    def one(cls, group):
        return cls.char(group, group.trivial)

    @classmethod
    def zero(cls, group):
        return cls(group)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, o):
        d = dict(self.coeffs)
        for c, v in o.coeffs.items():
            d[c] = d.get(c, 0) + v
        return RepElement(self.group, d)

    def __neg__(self):
        return RepElement(self.group, {c: -v for c, v in self.coeffs.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, int):
            return RepElement(self.group, {c: v * o for c, v in self.coeffs.items()})
        d: Dict[Char, int] = {}
        mul = self.group.mul
        for a, x in self.coeffs.items():
            for b, y in o.coeffs.items():
                c = mul(a, b)
                d[c] = d.get(c, 0) + x * y
        return RepElement(self.group, d)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, RepElement) and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def unit_inverse(self):
        """Inverse of ``+-[L]``; other elements are not units."""
        if len(self.coeffs) == 1:
            (c, v), = self.coeffs.items()
            if v in (1, -1):
                return RepElement(self.group, {self.group.inv(c): v})
        raise NotInvertible(f"{self} is not a unit")

    def vector(self) -> List[int]:
        return [self.coeffs.get(c, 0) for c in self.group.chars()]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for c in sorted(self.coeffs):
            v = self.coeffs[c]
            name = "1" if not any(c) else "L" + "".join(str(x) for x in c)
            parts.append(f"{v:+d}*{name}" if name != "1" else f"{v:+d}")
        return " ".join(parts)


class RepPoly:
    """Laurent polynomial in ``T`` over ``R(G)``, stored as ``{power: coefficient}``."""

    __slots__ = ("group", "terms")

    def __init__(self, group: GroupSpec, terms: Dict[int, RepElement] | None = None):
        self.group = group
        self.terms = {p: c for p, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def from_list(cls, group, coeffs: Iterable[RepElement], low: int = 0):
        return cls(group, {low + i: c for i, c in enumerate(coeffs)})

    @classmethod
    def monomial(cls, group, power: int, coeff: RepElement | None = None):
        return cls(group, {power: coeff if coeff is not None else RepElement.one(group)})

    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    def low(self) -> int:
        return min(self.terms) if self.terms else 0

    def coeff(self, p: int) -> RepElement:
        return self.terms.get(p, RepElement.zero(self.group))

    @property
    def monic(self) -> bool:
        return bool(self.terms) and self.coeff(self.degree()) == RepElement.one(self.group)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, o):
        d = dict(self.terms)
        for p, c in o.terms.items():
            d[p] = d[p] + c if p in d else c
        return RepPoly(self.group, d)

    def __neg__(self):
        return RepPoly(self.group, {p: -c for p, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, RepElement):
            return RepPoly(self.group, {p: c * o for p, c in self.terms.items()})
        d: Dict[int, RepElement] = {}
        for p, a in self.terms.items():
            for q, b in o.terms.items():
                d[p + q] = d[p + q] + a * b if p + q in d else a * b
        return RepPoly(self.group, d)

    def __eq__(self, o):
        return isinstance(o, RepPoly) and self.terms == o.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[p]})T^{p}" for p in sorted(self.terms, reverse=True))


@dataclass(frozen=True)
class Representation:
    group: GroupSpec
    chars: Tuple[Char, ...]

    def __post_init__(self):
        object.__setattr__(self, "chars", tuple(sorted(self.group.norm(c) for c in self.chars)))

    @property
    def dim(self) -> int:
        return len(self.chars)

    def __add__(self, o):
        return Representation(self.group, self.chars + o.chars)


def exterior_power(V: Representation, k: int) -> RepElement:
    """Elementary symmetric polynomial ``e_k`` in the characters of ``V``."""
    if k < 0:
        raise InvalidInput("k must be nonnegative")
    G = V.group
    e = [RepElement.one(G)] + [RepElement.zero(G) for _ in range(V.dim)]
    for c in V.chars:
        L = RepElement.char(G, c)
        for j in range(V.dim, 0, -1):
            e[j] = e[j] + e[j - 1] * L
    return e[k] if k <= V.dim else RepElement.zero(G)


def f_V(V: Representation) -> RepPoly:
    """``sum_k (-1)^k lambda^k(V) T^{d-k}``."""
    d = V.dim
    return RepPoly(V.group, {d - k: exterior_power(V, k) * (-1) ** k for k in range(d + 1)})


def f_V_product(V: Representation) -> RepPoly:
    """``prod (T - [L_i])``."""
    G = V.group
    out = RepPoly.monomial(G, 0)
    for c in V.chars:
        out = out * RepPoly(G, {1: RepElement.one(G), 0: -RepElement.char(G, c)})
    return out


def f_product_check(V: Representation, W: Representation) -> bool:
    return f_V(V + W) == f_V(V) * f_V(W)


def _polymod(g: RepPoly, f: RepPoly) -> RepPoly:
    """Remainder of a polynomial (nonnegative powers) by a monic ``f``."""
    n = f.degree()
    if n == 0:
        return RepPoly(g.group)
    terms = dict(g.terms)
    fterms = f.terms
    for p in range(g.degree(), n - 1, -1):
        c = terms.pop(p, None)
        if c is None or c.is_zero():
            continue
        for q, a in fterms.items():
            if q == n:
                continue
            idx = p - n + q
            terms[idx] = terms[idx] - c * a if idx in terms else -(c * a)
    return RepPoly(g.group, terms)


def laurent_reduce(g: RepPoly, modulus: RepPoly) -> RepPoly:
    """Canonical remainder of a Laurent polynomial modulo a monic polynomial."""
    if not modulus.monic:
        raise InvalidInput("modulus must be monic")
    if modulus.low() < 0:
        raise InvalidInput("modulus must be an ordinary polynomial")
    n = modulus.degree()
    if n == 0:
        return RepPoly(g.group)
    low = g.low()
    shifted = RepPoly(g.group, {p - min(low, 0): c for p, c in g.terms.items()})
    out = _polymod(shifted, modulus)
    if low >= 0:
        return out
    c0 = modulus.coeff(0)
    try:
        c0inv = c0.unit_inverse()
    except NotInvertible as exc:
        raise NotInvertible("constant term of the modulus is not a unit") from exc
    # T^{-1} = -c0^{-1} (f - c0) / T
    rest = RepPoly(g.group, {p - 1: c for p, c in modulus.terms.items() if p > 0})
    tinv = rest * (-c0inv)
    for _ in range(-low):
        out = _polymod(out * tinv, modulus)
    return out


def residue(g: RepPoly, V0: Representation, V1: Representation) -> RepElement:
    """Coefficient of ``T^{d0-1}`` in ``g f_{V1}`` reduced modulo ``f_{V0}``."""
    if not V1.dim >= V0.dim >= 1:
        raise InvalidInput("residue needs dim V1 >= dim V0 >= 1")
    r = laurent_reduce(g * f_V(V1), f_V(V0))
    return r.coeff(V0.dim - 1)


def is_subrep(V0: Representation, V1: Representation) -> bool:
    a, b = Counter(V0.chars), Counter(V1.chars)
    return all(b[c] >= n for c, n in a.items())


# ---------------------------------------------------------------- integer lattices

def _col_hnf_with_transform(M: List[List[int]]):
    """Column-style echelon form ``M U = H`` with ``U`` unimodular.

    Returns ``(H, U, rank)``; the last ``n - rank`` columns of ``U`` span the
    integer kernel of ``M``.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [row[:] for row in M]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for R in (A, U):
            for row in R:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + b * y, c * x + d * y

    piv = 0
    for r in range(m):
        if piv >= n:
            break
        for j in range(piv + 1, n):
            if A[r][j] == 0:
                continue
            a, b = A[r][piv], A[r][j]
            g, x, y = _egcd(a, b)
            colop(piv, j, x, y, -b // g, a // g)
        if A[r][piv] != 0:
            if A[r][piv] < 0:
                _negate_col(A, U, piv)
            piv += 1
    return A, U, piv


def _negate_col(A, U, i):
    for R in (A, U):
        for row in R:
            row[i] = -row[i]


def _egcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def integer_kernel(M: List[List[int]], ncols: int) -> List[List[int]]:
    """Basis (as row vectors) of ``{x in Z^n : M x = 0}``."""
    if not M:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    _, U, rank = _col_hnf_with_transform(M)
    return [[U[i][j] for i in range(ncols)] for j in range(rank, ncols)]


def row_hnf(B: List[List[int]]) -> List[List[int]]:
    """Canonical row Hermite normal form of the lattice spanned by the rows of ``B``."""
    if not B:
        return []
    A = [row[:] for row in B]
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        if r >= m:
            break
        for i in range(r + 1, m):
            while A[i][c] != 0:
                q = A[r][c] // A[i][c]
                A[r] = [x - q * y for x, y in zip(A[r], A[i])]
                A[r], A[i] = A[i], A[r]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        r += 1
    return [row for row in A if any(row)]


def _poly_vector(p: RepPoly, n: int, chars) -> List[int]:
    out = []
    for j in range(n):
        c = p.coeff(j)
        out.extend(c.coeffs.get(ch, 0) for ch in chars)
    return out


def restriction_kernel_check(V0: Representation, V1: Representation) -> dict:
    """Kernel of ``R(G)[T]/f_{V0+V1} -> R(G)[T]/f_{V1}`` against the span of ``f_{V1} T^j``.

    Both quotients are free ``Z``-lattices on ``characters x powers``; the
    kernel is computed by exact integer elimination and compared with the
    lattice generated by ``[L] T^j f_{V1}``, ``j < dim V0``, through their
    Hermite normal forms.
    """
    G = V0.group
    if V0.dim + V1.dim > 6 or G.size > 6:
        raise TooLarge("restriction kernel check is limited to dim V0 + dim V1 <= 6 and |G| <= 6")
    chars = G.chars()
    n_src = V0.dim + V1.dim
    n_tgt = V1.dim
    f1 = f_V(V1)
    rows = [[0] * (len(chars) * n_src) for _ in range(len(chars) * n_tgt)]
    col = 0
    for j in range(n_src):
        for ch in chars:
            img = laurent_reduce(RepPoly.monomial(G, j, RepElement.char(G, ch)), f1)
            v = _poly_vector(img, n_tgt, chars)
            for i, x in enumerate(v):
                rows[i][col] = x
            col += 1
    kernel = integer_kernel(rows if n_tgt else [], len(chars) * n_src)
    gens = []
    for j in range(V0.dim):
        for ch in chars:
            p = RepPoly.monomial(G, j, RepElement.char(G, ch)) * f1
            gens.append(_poly_vector(p, n_src, chars))
    hk, hg = row_hnf(kernel), row_hnf(gens)
    return {
        "orders": list(G.orders),
        "v0": [list(c) for c in V0.chars],
        "v1": [list(c) for c in V1.chars],
        "degenerate": V0.dim == 0,
        "kernel_rank": len(hk),
        "expected_rank": G.size * V0.dim,
        "kernel_basis": hk,
        "generated_basis": hg,
        "match": hk == hg,
    }


# ---------------------------------------------------------------- Koszul complexes

@dataclass
class KoszulComplex:
    group: GroupSpec
    x: List[RepElement]
    subsets: List[List[Tuple[int, ...]]]
    differentials: List[List[List[RepElement]]]

    @property
    def rank(self) -> int:
        return len(self.x)

    def d_squared_zero(self) -> bool:
        for i in range(1, len(self.differentials)):
            A, B = self.differentials[i - 1], self.differentials[i]
            for r in range(len(A)):
                for c in range(len(B[0]) if B else 0):
                    acc = RepElement.zero(self.group)
                    for m in range(len(B)):
                        acc = acc + A[r][m] * B[m][c]
                    if not acc.is_zero():
                        return False
        return True

    def all_zero(self) -> bool:
        return all(e.is_zero() for D in self.differentials for row in D for e in row)

    def to_json(self) -> dict:
        return {
            "orders": list(self.group.orders),
            "characters": [list(c) for c in self.group.chars()],
            "x": [e.vector() for e in self.x],
            "differentials": [[[e.vector() for e in row] for row in D] for D in self.differentials],
            "d_squared_zero": self.d_squared_zero(),
        }


def koszul_build(x: List[RepElement], group: GroupSpec | None = None) -> KoszulComplex:
    """Exterior complex with ``d(e_J) = sum_k (-1)^(k-1) x_{j_k} e_{J - j_k}``.

    ``differentials[i-1]`` is the matrix of ``d_i: K_i -> K_{i-1}``, rows
    indexed by ``(i-1)``-subsets and columns by ``i``-subsets.
    """
    if group is None:
        if not x:
            raise InvalidInput("empty sequence needs an explicit group")
        group = x[0].group
    r = len(x)
    subsets = [list(itertools.combinations(range(r), i)) for i in range(r + 1)]
    diffs = []
    for i in range(1, r + 1):
        index = {J: n for n, J in enumerate(subsets[i - 1])}
        D = [[RepElement.zero(group) for _ in subsets[i]] for _ in subsets[i - 1]]
        for c, J in enumerate(subsets[i]):
            for pos, j in enumerate(J):
                rest = J[:pos] + J[pos + 1:]
                D[index[rest]][c] = x[j] * (-1) ** pos
        diffs.append(D)
    return KoszulComplex(group, list(x), subsets, diffs)


def tower_koszul(V0: Representation, V1: Representation):
    """Koszul complex on ``x_j = residue(T^j)``, ``j < dim V0``, with a subrep report."""
    G = V0.group
    if V0.dim + V1.dim > 6 or G.size > 6:
        raise TooLarge("Koszul check is limited to dim V0 + dim V1 <= 6 and |G| <= 6")
    xs = [residue(RepPoly.monomial(G, j), V0, V1) for j in range(V0.dim)]
    K = koszul_build(xs, G)
    sub = is_subrep(V0, V1)
    vanish = all(e.is_zero() for e in xs)
    report = {
        "x": [repr(e) for e in xs],
        "all_zero": vanish,
        "is_subrep": sub,
        "consistent": vanish == sub,
        "d_squared_zero": K.d_squared_zero(),
        "residue_convention": RESIDUE_CONVENTION,
    }
    return K, report


def representations(G: GroupSpec, dim: int):
    """All multisets of characters of the given size."""
    return [Representation(G, c) for c in itertools.combinations_with_replacement(G.chars(), dim)]
