from __future__ import annotations

import mpmath
import numpy as np
import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, strategies as st

from kextremal.algebra import Scalar
from kextremal.isoparametric import (
    classify,
    enumerate_tori,
    extremality_residual,
    g4_admissible,
    g4_polynomial,
    solve_g2,
    solve_g3,
    solve_g4,
    solve_g6,
    spectrum_from_lambda1,
    torus_obstruction,
)
from kextremal.models import willmore
from kextremal.tensors import PrincipalSpectrum

S = Scalar.parse


def curv(*xs):
    return tuple(S(x) for x in xs)


# -- cotangent ladder ----------------------------------------------------------

@pytest.mark.parametrize(
    "g, lam1, expected",
    [
        (3, "sqrt(3)", ("sqrt(3)", "0", "-sqrt(3)")),
        (4, "1+sqrt(2)", ("1+sqrt(2)", "-1+sqrt(2)", "1-sqrt(2)", "-1-sqrt(2)")),
        (6, "2+sqrt(3)", ("2+sqrt(3)", "1", "2-sqrt(3)", "-2+sqrt(3)", "-1", "-2-sqrt(3)")),
        (2, "3/2", ("3/2", "-2/3")),
    ],
)
def test_ladder_examples(g, lam1, expected):
    mult = (1, 1) if g in (2, 4) else (1,)
    iso = spectrum_from_lambda1(g, mult, S(lam1))
    assert iso.curvatures == curv(*expected)
    assert all(c.is_exact for c in iso.curvatures)


@pytest.mark.parametrize("g, mult", [(3, (2,)), (4, (1, 3)), (6, (1,)), (2, (2, 5))])
@given(offset=st.fractions(min_value=mpq(1, 50), max_value=20, max_denominator=50))
def test_ladder_matches_trig(g, mult, offset):
    low = {2: 0, 3: 1 / mpmath.sqrt(3), 4: 1, 6: mpmath.sqrt(3)}[g]
    lam1 = Scalar(mpq(offset.numerator, offset.denominator)) + Scalar(
        {2: 0, 3: 0, 4: 1, 6: 0}[g]
    )
    if g == 3:
        lam1 = lam1 + S("1/3*sqrt(3)")
    if g == 6:
        lam1 = lam1 + S("sqrt(3)")
    mpmath.mp.dps = 50
    theta = mpmath.acot(lam1.to_mpf())
    assert lam1.to_mpf() > low
    iso = spectrum_from_lambda1(g, mult, lam1)
    curvs = iso.curvatures
    for a, c in enumerate(curvs):
        want = mpmath.cot(theta + a * mpmath.pi / g)
        assert abs(c.to_mpf() - want) < mpmath.mpf(10) ** -35 * (1 + abs(want))
    assert all(x > y for x, y in zip(curvs, curvs[1:]))


@pytest.mark.parametrize(
    "g, mult, lam1",
    [(3, (1,), "1/2"), (4, (1, 1), "1"), (6, (1,), "3/2"), (2, (1, 1), "0"), (6, (1,), "sqrt(3)")],
)
def test_ladder_domain_errors(g, mult, lam1):
    with pytest.raises(ValueError, match="requires lambda_1"):
        spectrum_from_lambda1(g, mult, S(lam1))


@pytest.mark.parametrize("g, mult", [(3, (1, 2, 1)), (4, (1, 2, 2, 1)), (6, (1, 1, 1, 2, 1, 1)), (5, (1,))])
def test_ladder_multiplicity_errors(g, mult):
    with pytest.raises(ValueError):
        spectrum_from_lambda1(g, mult, S("10"))


# -- residual ----------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, mpq(3, 2), 5])
def test_residual_examples(k):
    for m in (1, 2, 5):
        assert extremality_residual(PrincipalSpectrum(((S("1"), m), (S("-1"), m))), k) == 0
    for m in (1, 2, 4, 8):
        iso = PrincipalSpectrum(tuple((c, m) for c in curv("sqrt(3)", "0", "-sqrt(3)")))
        assert extremality_residual(iso, k) == 0


def test_residual_t31():
    spec = PrincipalSpectrum(((S("-sqrt(5)"), 3), (S("1/5*sqrt(5)"), 7)))
    assert spec.S == mpq(82, 5)
    assert spec.mean ** 2 == mpq(16, 125)
    assert extremality_residual(spec, 1) == 0


def test_residual_rejects_small_k():
    with pytest.raises(ValueError):
        extremality_residual(PrincipalSpectrum(((S("1"), 2),)), mpq(1, 2))


spectra = st.lists(
    st.tuples(st.fractions(-6, 6, max_denominator=9), st.integers(1, 5)), min_size=1, max_size=5
)


@given(entries=spectra, k=st.fractions(1, 12, max_denominator=4))
def test_normal_flip_negates_residual(entries, k):
    spec = PrincipalSpectrum(tuple((Scalar(l), m) for l, m in entries))
    r = extremality_residual(spec, k)
    assert extremality_residual(spec.flipped(), k) == -r


def test_flip_symmetry_thousand_surd_spectra():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        d = int(rng.choice([2, 3, 5]))
        entries = []
        for _ in range(int(rng.integers(1, 5))):
            q, r = (mpq(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(2))
            entries.append((Scalar(q, r, d), int(rng.integers(1, 4))))
        spec = PrincipalSpectrum(tuple(entries))
        k = mpq(int(rng.integers(2, 21)), 2)
        r = extremality_residual(spec, k)
        assert extremality_residual(spec.flipped(), k) == -r
        assert (r == 0) == (extremality_residual(spec.flipped(), k) == 0)


# -- g = 2 ----------------------------------------------------------------------------

def test_g2_examples():
    t = solve_g2(4, 2, 1)
    assert t.radius_sq_first == mpq(1, 2)
    assert t.spectrum.mean == 0
    t = solve_g2(10, 3, 1)
    assert t.radius_sq_first == mpq(1, 6)
    assert t.H_sq == mpq(16, 125) and t.rho_sq == mpq(378, 25)
    assert t.rho_identity_holds
    assert solve_g2(8, 1, 3) is None
    assert "2 < 1 < 6" in torus_obstruction(8, 1, 3)


def test_enumerate_examples():
    assert [t.m for t in enumerate_tori(4, 1)] == [2]
    assert [t.m for t in enumerate_tori(10, 1)] == [3, 4, 5, 6, 7]
    tori = enumerate_tori(6, 3)
    assert [t.m for t in tori] == [1, 2, 3, 4, 5]
    for t in tori:
        assert t.radius_sq_first == mpq(6 - t.m, 6)
        assert t.spectrum == willmore(t.m, 6 - t.m).geometry


def test_enumerate_can_be_empty():
    assert enumerate_tori(5, mpq(5, 4)) == []


@pytest.mark.parametrize("n", range(2, 13))
@pytest.mark.parametrize("k", [1, mpq(3, 2), 2, 3, mpq(7, 2), 6])
def test_tori_invariants(n, k):
    for t in enumerate_tori(n, k):
        assert 0 < t.radius_sq_first < 1
        assert t.rho_sq == n + n * (Scalar(mpq(n) / (2 * k)) - 1) * t.H_sq
        assert extremality_residual(t.spectrum, k) == 0


def _brute_force_tori(n, k):
    """Scan a^2 via the direct residual equation, independent of the closed form."""
    lam = sp.symbols("lam", positive=True)
    ms = []
    for m in range(1, n):
        # principal curvatures -lam (mult m) and 1/lam (mult n - m)
        curvs = [(-lam, m), (1 / lam, n - m)]
        s1 = sum(c * mult for c, mult in curvs)
        s2 = sum(c**2 * mult for c, mult in curvs)
        s3 = sum(c**3 * mult for c, mult in curvs)
        H = s1 / n
        kk = sp.Rational(k.numerator, k.denominator) if isinstance(k, type(mpq(1))) else sp.Integer(k)
        res = sp.together(s3 + n**2 / (2 * kk) * H**3 - (n / (2 * kk) + 1) * H * s2)
        num = sp.numer(res)
        num = sp.expand(num)
        if num == 0:
            ms.append(m)
            continue
        if any(r > 0 for r in sp.real_roots(sp.Poly(num, lam))):
            ms.append(m)
    return ms


@pytest.mark.parametrize("n, k", [(4, 1), (10, 1), (6, 3), (7, 1), (8, 3), (9, mpq(3, 2)), (12, 2)])
def test_enumerate_matches_brute_force(n, k):
    assert [t.m for t in enumerate_tori(n, k)] == _brute_force_tori(n, k)


# -- g = 3, 6 -------------------------------------------------------------------------------

def _sympy_roots(g, m, k, low):
    """Roots above ``low`` of the residual, solved in lambda_1 with sympy."""
    lam = sp.symbols("lam", real=True)
    shifts = {3: [sp.sqrt(3) / 3, -sp.sqrt(3) / 3], 6: [sp.sqrt(3), sp.sqrt(3) / 3, 0, -sp.sqrt(3) / 3, -sp.sqrt(3)], 4: [1, 0, -1]}[g]
    curvs = [lam] + [(lam * c - 1) / (lam + c) for c in shifts]
    mults = m if isinstance(m, tuple) else (m,) * g
    n = sum(mults)
    s1 = sum(c * w for c, w in zip(curvs, mults))
    s2 = sum(c**2 * w for c, w in zip(curvs, mults))
    s3 = sum(c**3 * w for c, w in zip(curvs, mults))
    kk = sp.Rational(k)
    H = s1 / n
    num = sp.numer(sp.together(s3 + n**2 / (2 * kk) * H**3 - (n / (2 * kk) + 1) * H * s2))
    num = sp.expand(num)
    if num == 0:
        return "all"
    return [r for r in sp.solve(num, lam) if r.is_real and sp.N(r - low, 50) > 0]


@pytest.mark.parametrize("m, k", [(1, 1), (1, 2), (2, 2), (4, 1), (8, 1), (8, 4), (2, 1), (4, 2)])
def test_g3_against_sympy(m, k):
    res = solve_g3(m, k)
    want = _sympy_roots(3, m, k, 1 / sp.sqrt(3))
    if want == "all":
        assert res.outcome == "all"
    else:
        assert res.outcome == "unique"
        assert len(want) == 1 and sp.simplify(want[0] - sp.sqrt(3)) == 0
        assert res.solutions[0].curvatures == curv("sqrt(3)", "0", "-sqrt(3)")


@pytest.mark.parametrize("m, k", [(1, 1), (1, 2), (2, 1), (2, 3), (2, mpq(3, 2))])
def test_g6_against_sympy(m, k):
    res = solve_g6(m, k)
    want = _sympy_roots(6, m, k, sp.sqrt(3))
    if want == "all":
        assert res.outcome == "all"
    else:
        assert res.outcome == "unique"
        assert len(want) == 1 and sp.simplify(want[0] - (2 + sp.sqrt(3))) == 0
        assert res.solutions[0].lambda1 == S("2+sqrt(3)")


def test_g3_g6_examples():
    assert solve_g3(1, 1).outcome == "unique"
    assert solve_g3(2, 1).outcome == "all"
    assert solve_g3(8, 4).outcome == "all"
    assert solve_g6(1, 1).solutions[0].curvatures[1] == 1
    assert solve_g6(2, 1).outcome == "all"
    assert solve_g6(2, 3).solutions[0].lambda1 == S("2+sqrt(3)")


@pytest.mark.parametrize("call", [lambda: solve_g3(3, 1), lambda: solve_g6(4, 1), lambda: solve_g3(1, mpq(1, 2))])
def test_invalid_inputs(call):
    with pytest.raises(ValueError):
        call()


# -- g = 4 ----------------------------------------------------------------------------------

@pytest.mark.parametrize("m, k", [(1, 1), (2, 2), (3, 1), (5, mpq(3, 2)), (4, 7)])
def test_g4_equal_multiplicities(m, k):
    res = solve_g4(m, m, k)
    assert res.outcome == "unique"
    assert res.roots == (Scalar(4),)
    sol = res.solutions[0]
    assert sol.lambda1 == S("1+sqrt(2)") and sol.lambda1.is_exact
    assert sol.is_minimal


def test_g4_degenerate_all():
    assert solve_g4(2, 2, 1).outcome == "all"
    assert g4_polynomial(2, 2, 1) == (0, 0, 0)


def test_g4_generic_451():
    res = solve_g4(4, 5, 1)
    assert g4_polynomial(4, 5, 1) == (-112, 80, 3120)  # -16 * (7x^2 - 5x - 195)
    assert res.outcome == "unique"
    assert res.roots == (S("5/14+1/14*sqrt(5485)"),)
    assert abs(float(res.roots[0]) - 5.647199) < 1e-6
    sol = res.solutions[0]
    assert abs(float(extremality_residual(sol.spectrum, 1))) < 1e-10
    # sympy: the same lambda_1 solves the residual equation directly
    want = _sympy_roots(4, (4, 5, 4, 5), 1, 1)
    assert len(want) == 1
    assert abs(float(sp.N(want[0], 30)) - float(sol.lambda1)) < 1e-12


def test_g4_452_has_no_root():
    res = solve_g4(4, 5, 2)
    assert g4_polynomial(4, 5, 2) == (0, 80, 1040)
    assert res.outcome == "none" and res.roots == ()


def _numpy_positive_roots(m1, m2, k):
    a, b, c = (float(x) for x in g4_polynomial(m1, m2, k))
    coeffs = np.trim_zeros([a, b, c], "f")
    if len(coeffs) <= 1:
        return 0
    return sum(1 for r in np.roots(coeffs) if abs(r.imag) < 1e-9 and r.real > 1e-12)


def test_g4_trichotomy_grid():
    for m2 in range(2, 11):
        for m1 in range(1, m2):
            for k2 in range(2, 17):
                k = mpq(k2, 2)
                res = solve_g4(m1, m2, k)
                predicted = 0 if m1 <= 2 * k <= m2 else 1
                assert len(res.roots) == predicted == _numpy_positive_roots(m1, m2, k)
                assert len(res.solutions) == predicted
                for sol in res.solutions:
                    assert abs(float(extremality_residual(sol.spectrum, k))) < 1e-9


def test_g4_reports_window_mismatch():
    res = solve_g4(2, 5, 2)  # m1 <= k <= m2 and m1 <= 2k <= m2 agree
    assert not any("window" in n for n in res.notes)
    res = solve_g4(3, 5, 3)  # k in [3, 5] but 2k = 6 > 5
    assert any("window" in n for n in res.notes)
    assert res.outcome == "unique"


def test_g4_admissibility_is_advisory():
    assert g4_admissible(2, 2) and g4_admissible(4, 5) and g4_admissible(1, 2)
    res = solve_g4(3, 5, 1)
    assert not g4_admissible(3, 5)
    assert any("advisory" in n for n in res.notes)
    assert res.outcome in ("unique", "none")


@pytest.mark.parametrize("m", [1, 2, 4, 8])
def test_closed_form_solutions_minimal(m):
    for k in (1, 2, 3):
        r = solve_g3(m, k)
        if r.outcome == "unique":
            assert r.solutions[0].spectrum.power_sum(1) == 0
    if m <= 2:
        r = solve_g6(m, 3)
        assert r.solutions[0].spectrum.power_sum(1) == 0
    r = solve_g4(m, m, mpq(2 * m + 1, 2))
    assert r.solutions[0].spectrum.power_sum(1) == 0


def test_classify_dispatch():
    assert classify(1, (5,), 2).outcome == "all"
    r = classify(2, (3, 7), 1)
    assert r.outcome == "unique"
    assert extremality_residual(r.solutions[0].spectrum, 1) == 0
    assert classify(2, (1, 7), 3).outcome == "none"
    assert classify(3, (1,), 1).solutions[0].lambda1 == S("sqrt(3)")
    assert classify(4, (1, 1), 1).solutions[0].lambda1 == S("1+sqrt(2)")
    with pytest.raises(ValueError):
        classify(5, (1,), 1)
