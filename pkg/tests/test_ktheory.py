import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from isotower import ktheory as kt
from isotower.errors import InvalidInput, NotInvertible, TooLarge

Z1 = kt.GroupSpec((1,))
Z2 = kt.GroupSpec((2,))
Z3 = kt.GroupSpec((3,))
Z2Z2 = kt.GroupSpec((2, 2))
Z2Z3 = kt.GroupSpec((2, 3))


def rep(G, *chars):
    return kt.Representation(G, tuple(tuple(c) if isinstance(c, tuple) else (c,) for c in chars))


def el(G, coeffs):
    return kt.RepElement(G, {(c,) if isinstance(c, int) else c: v for c, v in coeffs.items()})


def poly(G, coeffs):
    return kt.RepPoly(G, {p: (c if isinstance(c, kt.RepElement) else el(G, c)) for p, c in coeffs.items()})


ONE2 = el(Z2, {0: 1})
SIG = el(Z2, {1: 1})


def test_group_spec():
    assert Z2Z3.size == 6 and len(Z2Z3.chars()) == 6
    assert Z2Z3.mul((1, 2), (1, 2)) == (0, 1)
    with pytest.raises(InvalidInput):
        kt.GroupSpec((0,))
    with pytest.raises(InvalidInput):
        rep(Z2Z2, 1)


def test_exterior_power_zero():
    assert kt.exterior_power(rep(Z2, 0, 1), 0) == kt.RepElement.one(Z2)


def test_exterior_power_top():
    assert kt.exterior_power(rep(Z2, 0, 1), 2) == SIG


def test_exterior_power_above_dim():
    assert kt.exterior_power(rep(Z2, 0, 1), 3).is_zero()


def test_f_v_zero_rep():
    assert kt.f_V(rep(Z2)) == kt.RepPoly.monomial(Z2, 0)


def test_f_v_sigma():
    assert kt.f_V(rep(Z2, 1)) == poly(Z2, {1: {0: 1}, 0: {1: -1}})


def test_f_v_z3():
    f = kt.f_V(rep(Z3, 1, 2))
    assert f == poly(Z3, {2: {0: 1}, 1: {1: -1, 2: -1}, 0: {0: 1}})


def test_f_v_matches_product():
    for G in (Z2, Z3, Z2Z2):
        for d in range(4):
            for V in kt.representations(G, d):
                assert kt.f_V(V) == kt.f_V_product(V)
                assert kt.f_V(V).monic


def test_f_product_check_exhaustive():
    for d1 in range(4):
        for d2 in range(4 - d1):
            for V in kt.representations(Z2Z2, d1):
                for W in kt.representations(Z2Z2, d2):
                    assert kt.f_product_check(V, W)
    V = rep(Z2Z3, (1, 1), (0, 2))
    assert kt.f_V(V + V) == kt.f_V(V) * kt.f_V(V)


def test_laurent_reduce_modulus():
    f = kt.f_V(rep(Z3, 1, 2))
    assert kt.laurent_reduce(f, f).is_zero()


def test_laurent_reduce_inverse_trivial():
    mod = poly(Z1, {1: {0: 1}, 0: {0: -1}})
    assert kt.laurent_reduce(kt.RepPoly.monomial(Z1, -1), mod) == kt.RepPoly.monomial(Z1, 0)


def test_laurent_reduce_inverse_sigma():
    mod = kt.f_V(rep(Z2, 1))
    assert kt.laurent_reduce(kt.RepPoly.monomial(Z2, -1), mod) == kt.RepPoly(Z2, {0: SIG})


def test_laurent_reduce_non_unit():
    mod = poly(Z2, {1: {0: 1}, 0: {0: 2}})
    with pytest.raises(NotInvertible):
        kt.laurent_reduce(kt.RepPoly.monomial(Z2, -1), mod)
    with pytest.raises(InvalidInput):
        kt.laurent_reduce(kt.RepPoly.monomial(Z2, 1), poly(Z2, {1: {0: 2}}))


def test_laurent_reduce_inverse_relation():
    # T * T^{-1} reduces to 1 for every modulus f_V
    for V in kt.representations(Z2Z3, 2):
        f = kt.f_V(V)
        tinv = kt.laurent_reduce(kt.RepPoly.monomial(Z2Z3, -1), f)
        assert kt.laurent_reduce(tinv * kt.RepPoly.monomial(Z2Z3, 1), f) == kt.RepPoly.monomial(Z2Z3, 0)


def test_residue_example():
    r = kt.residue(kt.RepPoly.monomial(Z2, 0), rep(Z2, 0), rep(Z2, 1))
    assert r == ONE2 - SIG


def test_residue_trivial_group():
    for p in range(-2, 3):
        assert kt.residue(kt.RepPoly.monomial(Z1, p), rep(Z1, 0), rep(Z1, 0)).is_zero()


def test_residue_subrep_vanishes():
    for G in (Z2, Z3, Z2Z2):
        for d0 in (1, 2):
            for V0 in kt.representations(G, d0):
                for extra in kt.representations(G, 1):
                    for p in range(-1, 3):
                        assert kt.residue(kt.RepPoly.monomial(G, p), V0, V0 + extra).is_zero()


def test_residue_precondition():
    with pytest.raises(InvalidInput):
        kt.residue(kt.RepPoly.monomial(Z2, 0), rep(Z2, 0, 1), rep(Z2, 0))


def test_residue_as_total_residue():
    # simple roots: sum over roots r of V0 of g(r) f_V1(r) / f_V0'(r), checked by sympy
    # over the trivial group with distinct integer roots
    T = sympy.Symbol("T")
    G = Z1
    V0, V1 = rep(G, 0), rep(G, 0, 0)
    g = kt.RepPoly.monomial(G, 2)
    f0, f1 = (T - 1), (T - 1) ** 2
    expected = sympy.residue(T ** 2 * f1 / f0, T, 1)
    assert kt.residue(g, V0, V1).vector() == [int(expected)]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8),
       st.lists(st.integers(-3, 3), min_size=8, max_size=8),
       st.integers(-2, 2), st.integers(0, 3), st.integers(0, 3))
def test_residue_linear(a, b, p, c0, c1):
    chars = Z2Z2.chars()
    ga = kt.RepPoly(Z2Z2, {p: el(Z2Z2, dict(zip(chars, a[:4]))), p + 1: el(Z2Z2, dict(zip(chars, a[4:])))})
    gb = kt.RepPoly(Z2Z2, {p: el(Z2Z2, dict(zip(chars, b[:4]))), 0: el(Z2Z2, dict(zip(chars, b[4:])))})
    V0 = kt.Representation(Z2Z2, (chars[c0],))
    V1 = kt.Representation(Z2Z2, (chars[c1], chars[(c1 + 1) % 4]))
    s = el(Z2Z2, {chars[1]: 2, chars[3]: -1})
    lhs = kt.residue(ga * kt.RepPoly(Z2Z2, {0: s}) + gb, V0, V1)
    rhs = kt.residue(ga, V0, V1) * s + kt.residue(gb, V0, V1)
    assert lhs == rhs


def test_residue_vanishing_counterexample_klein_four():
    # V0 one character, V1 the other three: (1-a)(1-b)(1-ab) = 0 in R(Z/2 x Z/2)
    chars = Z2Z2.chars()
    for chi in chars:
        V0 = kt.Representation(Z2Z2, (chi,))
        V1 = kt.Representation(Z2Z2, tuple(c for c in chars if c != chi))
        assert not kt.is_subrep(V0, V1)
        _, report = kt.tower_koszul(V0, V1)
        assert report["all_zero"] and not report["consistent"]


def test_residue_vanishing_iff_subrep_elsewhere():
    for G in (Z1, Z2, Z3, kt.GroupSpec((4,)), Z2Z3):
        for d0 in (1, 2):
            for d1 in range(d0, 4 - d0 + 1):
                for V0 in kt.representations(G, d0):
                    for V1 in kt.representations(G, d1):
                        _, report = kt.tower_koszul(V0, V1)
                        assert report["consistent"], (G, V0, V1)


def test_is_subrep_examples():
    V = rep(Z2, 0, 1)
    assert kt.is_subrep(V, V)
    assert not kt.is_subrep(rep(Z2, 1), rep(Z2, 0, 0))
    assert kt.is_subrep(V, rep(Z2, 0, 1, 1))


def test_kernel_trivial_group():
    rep_ = kt.restriction_kernel_check(rep(Z1, 0), rep(Z1, 0, 0))
    assert rep_["match"] and rep_["kernel_rank"] == 1
    assert rep_["kernel_basis"] == [[1, -2, 1]]


def test_kernel_z2():
    rep_ = kt.restriction_kernel_check(rep(Z2, 0), rep(Z2, 1))
    assert rep_["match"] and rep_["kernel_rank"] == 2
    # generators of (T - sigma): -sigma + T and -1 + sigma T in coordinates (1, sigma, T, sigma T)
    assert rep_["generated_basis"] == kt.row_hnf([[0, -1, 1, 0], [-1, 0, 0, 1]])


def test_kernel_degenerate():
    rep_ = kt.restriction_kernel_check(rep(Z2), rep(Z2, 0, 1))
    assert rep_["degenerate"] and rep_["kernel_rank"] == 0 and rep_["match"]


def test_kernel_too_large():
    with pytest.raises(TooLarge):
        kt.restriction_kernel_check(rep(Z2, 0, 0, 0), rep(Z2, 0, 0, 0, 1))
    with pytest.raises(TooLarge):
        kt.restriction_kernel_check(rep(kt.GroupSpec((7,)), 0), rep(kt.GroupSpec((7,)), 0))


def _in_span(v, basis):
    # integer membership of v in the row lattice of basis, through sympy
    if not basis:
        return not any(v)
    B = sympy.Matrix(basis).T
    sol, params = B.gauss_jordan_solve(sympy.Matrix(v))
    sol = sol.subs({p: 0 for p in params})
    return all(x.is_integer for x in sol)


def test_integer_kernel_against_sympy():
    cases = [
        [[1, 2, 3], [2, 4, 6]],
        [[2, 4, 0, 1], [0, 6, 3, 3]],
        [[1, -1, 0, 0, 2], [0, 3, 3, 1, 0], [2, 1, 3, 1, 4]],
    ]
    for M in cases:
        n = len(M[0])
        K = kt.integer_kernel(M, n)
        SM = sympy.Matrix(M)
        assert len(K) == n - SM.rank()
        for k in K:
            assert all(x == 0 for x in SM * sympy.Matrix(k))
        # saturated lattice: every invariant factor is 1
        snf = smith_normal_form(sympy.Matrix(K), domain=sympy.ZZ)
        assert all(abs(snf[i, i]) == 1 for i in range(len(K)))
        # primitive integer multiples of the rational kernel lie in the lattice
        for v in SM.nullspace():
            den = sympy.ilcm(*[x.q for x in v])
            w = [int(x * den) for x in v]
            g = sympy.igcd(*w)
            assert _in_span([x // g for x in w], K)


def test_row_hnf_canonical():
    B = [[2, 4, 6], [1, 1, 1]]
    H = kt.row_hnf(B)
    assert kt.row_hnf([[3, 5, 7], [1, 1, 1]]) == H
    for row in B:
        assert _in_span(row, H)
    for row in H:
        assert _in_span(row, B)


def test_kernel_checks_match_grid():
    for G in (Z1, Z2, Z3, Z2Z2):
        for d0 in (1, 2):
            for V0 in kt.representations(G, d0):
                for V1 in kt.representations(G, 2):
                    assert kt.restriction_kernel_check(V0, V1)["match"]


def test_koszul_rank_one():
    a = el(Z2, {0: 1, 1: -1})
    K = kt.koszul_build([a])
    assert K.differentials == [[[a]]]


def test_koszul_rank_two():
    a, b = el(Z2, {0: 1, 1: -1}), el(Z2, {1: 2})
    K = kt.koszul_build([a, b])
    assert K.d_squared_zero()
    assert K.differentials[1] == [[-b], [a]]


def test_koszul_rank_three_random(rng):
    chars = Z2Z3.chars()
    for _ in range(20):
        xs = [el(Z2Z3, {c: int(v) for c, v in zip(chars, rng.integers(-3, 4, 6))}) for _ in range(3)]
        K = kt.koszul_build(xs)
        assert [len(s) for s in K.subsets] == [1, 3, 3, 1]
        assert K.d_squared_zero()


def test_koszul_json():
    K = kt.koszul_build([el(Z2, {0: 1, 1: -1})])
    js = K.to_json()
    assert js["x"] == [[1, -1]] and js["d_squared_zero"]


def test_koszul_empty_needs_group():
    with pytest.raises(InvalidInput):
        kt.koszul_build([])
    assert kt.koszul_build([], Z2).rank == 0


def test_tower_koszul_subrep():
    K, report = kt.tower_koszul(rep(Z3, 1), rep(Z3, 1, 2))
    assert report["all_zero"] and report["is_subrep"] and K.all_zero()
    assert report["residue_convention"] == "dT"


def test_tower_koszul_nonsubrep():
    K, report = kt.tower_koszul(rep(Z2, 0), rep(Z2, 1))
    assert report["x"] == ["+1 -1*L1"] and not report["all_zero"] and report["consistent"]


def test_tower_koszul_too_large():
    with pytest.raises(TooLarge):
        kt.tower_koszul(rep(Z2, 0, 0, 0), rep(Z2, 0, 0, 0, 1))


def test_representations_count():
    # multisets of size 2 from 4 characters
    assert len(kt.representations(Z2Z2, 2)) == len(list(itertools.combinations_with_replacement(range(4), 2)))
