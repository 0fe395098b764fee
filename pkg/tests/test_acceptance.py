"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Criterion 10 has a clause that does not hold over Z/2 x Z/2; that clause is an
expected failure with the counterexamples reported, and the rest of the
criterion is asserted separately.
"""
import time

import numpy as np
import pytest

from isotower import builtins as bmaps
from isotower import harness
from isotower.facial import degree_on_diagonal
from isotower.harness import SuiteConfig

DEFAULT = SuiteConfig()
EQUIVARIANCE_GROUPS = [(2,), (4,), (2, 3)]


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    return emit


def rng_for(name):
    return np.random.default_rng(harness.derive_seed(0, f"acceptance.{name}"))


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def test_criterion_01_functional_calculus(report):
    res, dt = timed(harness.check_calculus_laws, DEFAULT, rng_for(1), dims=range(2, 7))
    ok = res.status == "pass" and dt < 10
    report(1, ok, f"max deviation {res.metrics['max_deviation']} over {res.metrics['samples']} checks, {dt:.1f}s")
    assert ok, res.witness


def test_criterion_02_lipschitz(report):
    res, dt = timed(harness.check_lipschitz, DEFAULT, rng_for(2), pairs=10_000)
    ok = res.status == "pass" and dt < 10 and res.metrics["samples"] == 10_000
    report(2, ok, f"worst excess {res.metrics['max_deviation']} over 10^4 pairs, {dt:.1f}s")
    assert ok, res.witness


def test_criterion_03_roundtrips(report):
    res, dt = timed(harness.check_roundtrips, DEFAULT, rng_for(3))
    ok = res.status == "pass" and dt < 60 and res.metrics["tolerance"] == 1e-8
    report(3, ok, f"max deviation {res.metrics['max_deviation']} over the default grid, {dt:.1f}s")
    assert ok, res.witness


def test_criterion_04_squares(report):
    a = harness.check_squares(DEFAULT, rng_for("4a"))
    b = harness.check_frak_squares(DEFAULT, rng_for("4b"))
    ok = all(r.status == "pass" and r.metrics["tolerance"] == 1e-9 for r in (a, b))
    report(4, ok, f"tower squares {a.metrics['max_deviation']}, operator squares {b.metrics['max_deviation']}")
    assert ok, (a.witness, b.witness)


def test_criterion_05_ndr(report):
    results = harness.check_ndr(SuiteConfig(d0=3, d1=5), rng_for(5), points=1000)
    by_id = {r.id: r for r in results}
    ok = all(r.status == "pass" for r in results)
    ok = ok and {"ndr.axioms.halfdisc", "ndr.fault-injection"} <= set(by_id)
    ok = ok and sum(1 for i in by_id if i.startswith("ndr.axioms.")) == 3
    report(5, ok, ", ".join(f"{r.id}={r.status}" for r in results))
    assert ok, [r.witness for r in results if r.status != "pass"]


def test_criterion_06_degrees(report):
    got = {name: degree_on_diagonal(bmaps.builtin_map(name)) for name in bmaps.EXPECTED_DEGREES}
    ok = got["reflection"] == -1 and all(got[n] == 1 for n in ("chi-g", "ndr-f", "rk-gprime", "fbar"))
    res = harness.check_degrees(DEFAULT, rng_for(6))
    ok = ok and res.status == "pass"
    report(6, ok, f"{got}")
    assert ok, res.witness


def test_criterion_07_null_homotopies(report):
    res = harness.check_null_homotopies(DEFAULT, rng_for(7))
    ok = res.status == "pass" and res.metrics["tolerance"] == 1e-8
    report(7, ok, f"endpoint deviation {res.metrics['max_deviation']}, "
                  f"min growth {res.metrics['min_growth_ratio']}")
    assert ok, res.witness


def test_criterion_08_equivariance(report):
    res = harness.check_equivariance(DEFAULT, rng_for(8), trials=100, groups=EQUIVARIANCE_GROUPS)
    ok = res.status == "pass" and res.metrics["tolerance"] == 1e-9
    report(8, ok, f"max deviation {res.metrics['max_deviation']} over {res.metrics['samples']} draws, "
                  f"{len(res.metrics['per_map'])} maps")
    assert ok, res.witness


def test_criterion_09_miller_charts(report):
    inv = harness.check_res_inverse(DEFAULT, rng_for(9), dims=(2, 3, 4), samples=200)
    der = harness.check_derivative(DEFAULT, rng_for("9b"), h=1e-4)
    counts = inv.metrics["chart_B_samples"]
    ok = inv.status == "pass" and der.status == "pass" and all(v == 200 for v in counts.values())
    report(9, ok, f"res inverse {inv.metrics['max_deviation']} on {counts}, "
                  f"derivative {der.metrics['max_deviation']}")
    assert ok, (inv.witness, der.witness)


def _kt_cfg():
    return SuiteConfig()


def test_criterion_10_exact_identities(report):
    cfg = _kt_cfg()
    t0 = time.perf_counter()
    polys = harness.check_kt_polys(cfg, rng_for("10a"))
    koszul = harness.check_kt_koszul(cfg, rng_for("10b"))
    residue = {r.id: r for r in harness.check_kt_residue(cfg, rng_for("10c"))}
    dt = time.perf_counter() - t0
    parts = [polys, koszul, residue["ktheory.residue-linear"], residue["ktheory.residue-subrep-vanishes"]]
    assert all(r.status == "pass" for r in parts), [r.witness for r in parts]
    assert dt < 60


@pytest.mark.xfail(strict=True, reason="over Z/2 x Z/2 one character against the other three "
                                       "has vanishing residues without being a subrepresentation")
def test_criterion_10_residue_iff_subrep(report):
    res = {r.id: r for r in harness.check_kt_residue(_kt_cfg(), rng_for("10c"))}
    conv = res["ktheory.residue-vanishing-implies-subrep"]
    cases = conv.witness["cases"] if conv.witness else []
    report(10, conv.status == "pass",
           f"residue vanishing implies subrep: {conv.metrics['counterexamples']} counterexamples "
           f"in {conv.metrics['cases']} cases {cases}")
    assert {tuple(c["group"]) for c in cases} <= {(2, 2)} and len(cases) in (0, 4)
    assert conv.status == "pass"


def test_criterion_11_restriction_kernel(report):
    res = harness.check_kt_kernel(_kt_cfg(), rng_for(11))
    ok = res.status == "pass" and res.metrics["cases"] > 0
    report(11, ok, f"{res.metrics['cases']} cases, kernel lattice equals the span of f_V1 T^j")
    assert ok, res.witness
