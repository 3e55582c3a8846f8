from __future__ import annotations

import json
import math

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from kextremal.algebra import Scalar
from kextremal.isoparametric import enumerate_tori
from kextremal.jsonio import dumps
from kextremal.models import clifford, round_sphere, torus, veronese_surface, willmore
from kextremal.pinching import (
    EPSILON_VARIANTS,
    NOT_APPLICABLE,
    SATURATED,
    STRICT,
    EpsilonInputs,
    c1,
    c1_prime,
    c2,
    c3,
    epsilon,
    epsilon_derivation,
    sobolev_a,
    sobolev_b,
    sobolev_c,
    sobolev_constants,
    unit_ball_volume,
    verdict,
)

S = Scalar.parse


@pytest.mark.parametrize(
    "args, want",
    [
        ((3, 1, 0, 5, 1), "0"),
        ((2, 2, 0, 7, 1), "1/3"),
        ((4, 1, 1, 0, 2), "1"),
    ],
)
def test_c1_examples(args, want):
    assert c1(*args) == S(want)


@pytest.mark.parametrize(
    "args, want",
    [((2, 0, 3, 1), "1/3"), ((4, 0, 1, 5), "2/5"), ((6, 0, 0, 3), "3/7")],
)
def test_c1_prime_examples(args, want):
    assert c1_prime(*args) == S(want)


def test_c2_examples():
    assert c2(5, 0, 2, 1) == 3
    assert c2(4, 1, 0, 1) == 4
    got = c2(6, 1, 1, 3)
    assert got.is_exact
    assert abs(float(got) - (9 + 16 / math.sqrt(30))) < 1e-13
    with pytest.raises(ValueError):
        c2(3, 0, 0, 1)


@pytest.mark.parametrize("n", [2, 3, 7])
@pytest.mark.parametrize("k", [1, mpq(3, 2), 4])
def test_c3_examples(n, k):
    H = S("1/2")
    assert c3(n, 1, H, k) == n + n * (Scalar(mpq(n) / (2 * k)) - 1) * H * H
    assert c3(n, 1, 0, k) == n
    assert c3(2, 2, 0, 1) == mpq(4, 3)


@given(
    n=st.integers(2, 30),
    p=st.integers(1, 6),
    k1=st.fractions(1, 20, max_denominator=6),
    k2=st.fractions(1, 20, max_denominator=6),
)
def test_c3_minimal_independent_of_k(n, p, k1, k2):
    assert c3(n, p, 0, k1) == c3(n, p, 0, k2)


@given(n=st.integers(2, 30), rho=st.fractions(0, 10), k=st.fractions(1, 10))
def test_c1_hypersurface_minimal_is_zero(n, rho, k):
    assert c1(n, 1, 0, Scalar(rho), k) == 0


def test_bounds_reject_negative():
    with pytest.raises(ValueError):
        c1(3, 1, -1, 0, 1)
    with pytest.raises(ValueError):
        c3(3, 1, 0, mpq(1, 2))


def test_every_torus_saturates_c3():
    for n in range(2, 21):
        for k2 in range(2, 21):
            k = mpq(k2, 2)
            for t in enumerate_tori(n, k):
                H = t.spectrum.mean
                H = H if H >= 0 else -H
                assert t.rho_sq == c3(n, 1, H, k)


@pytest.mark.parametrize("m", range(1, 7))
@pytest.mark.parametrize("k", [1, mpq(3, 2), 5])
def test_clifford_saturation(m, k):
    r = verdict(clifford(m, m), k)
    assert r.rho_sq == 2 * m
    assert r.verdicts["thm_scal"].status == SATURATED
    assert r.verdicts["thm_sec"].status == SATURATED
    assert r.k_min == 0 and r.bounds["C1"] == 0
    assert r.k_extremal


@pytest.mark.parametrize("k", [1, mpq(3, 2), 2])
def test_veronese_saturation(k):
    r = verdict(veronese_surface(), k)
    assert r.p == 2 and r.rho_sq == mpq(4, 3)
    assert r.verdicts["thm_scal"].status == SATURATED
    assert r.verdicts["thm_sec"].status == SATURATED
    assert r.verdicts["thm_sec_n"].status == SATURATED
    assert r.verdicts["thm_ricci"].status == NOT_APPLICABLE
    assert r.k_min == mpq(1, 3) == c1_prime(2, 0, 0, k)
    assert list(r.el_residual) == [0, 0]


@pytest.mark.parametrize("n", [4, 5, 8])
@pytest.mark.parametrize("H", [0, mpq(1, 3), 2])
def test_round_sphere_strict(n, H):
    for k2 in range(2, n + 1):
        r = verdict(round_sphere(n, H), mpq(k2, 2))
        assert r.rho_sq == 0
        for name, v in r.verdicts.items():
            assert v.status == STRICT, name


def test_torus_verdict_and_flags():
    r = verdict(torus(10, 3, 1), 1)
    assert r.bounds["C3"] == mpq(378, 25)
    assert r.verdicts["thm_scal"].status == SATURATED
    r = verdict(willmore(1, 3), 1)
    assert not r.k_extremal
    assert any("not 1-extremal" in f for f in r.flags)


def test_report_json():
    r = verdict(veronese_surface(), 1)
    d = json.loads(dumps(r))
    assert d["verdicts"]["thm_scal"]["status"] == "saturated"
    assert d["bounds"]["C3"] == {"value": "4/3", "exact": True, "approx": pytest.approx(4 / 3)}
    assert d["bounds"]["C2"] is None


# -- Sobolev constants ------------------------------------------------------------

def test_sobolev_examples():
    assert sobolev_b(4, 1) == mpq(1, 9)
    assert sobolev_b(3, 2) == mpq(1, 32)
    assert abs(sobolev_a(3, 1) / sobolev_a(3, 3) - 2) < 1e-30
    assert abs(sobolev_a(5, 10**6) / sobolev_a(5, 1) * (10**6 + 1) - 2) < 1e-30
    with pytest.raises(ValueError):
        sobolev_b(4, 0)
    with pytest.raises(ValueError):
        sobolev_a(2, 1)


@pytest.mark.parametrize("n, want", [(2, math.pi), (3, 4 * math.pi / 3), (4, math.pi**2 / 2), (5, 8 * math.pi**2 / 15)])
def test_unit_ball_volume(n, want):
    assert abs(float(unit_ball_volume(n)) - want) < 1e-14


def test_sobolev_tuple():
    A, B, C, w = sobolev_constants(4, 1)
    assert B == mpq(1, 9) and w == pytest.approx(math.pi**2 / 2)
    assert C == pytest.approx(float(sobolev_c(4)))
    assert A > 0


# -- epsilon thresholds -----------------------------------------------------------------

def _independent_eps_ricci(n, k, H0_sq, delta0):
    """Float re-derivation from the displayed formulas, sharing no code with the package."""
    ck = (2 * k * n - n + 2) / (n * k * k)
    # ck * (n-2)^2 / (4 (n-1)^2 t) * (1 + H0^2) = n * delta0
    t = ck * (n - 2) ** 2 * (1 + H0_sq) / (4 * (n - 1) ** 2 * n * delta0)
    omega = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    C = 2**n * (n + 1) ** (1 + 1 / n) / ((n - 1) * omega ** (1 / n))
    A = (n - 2) ** 2 / (4 * (n - 1) ** 2 * (1 + t) * C * C)
    return t, ck * A / n


def test_ricci_worked_example():
    res = epsilon_derivation(EpsilonInputs("ricci", 4, 1, 1, 0, 1))
    assert res.t == mpq(1, 24)
    assert res.c_k == mpq(3, 2)
    t, want = _independent_eps_ricci(4, 1, 0.0, 1.0)
    assert t == pytest.approx(1 / 24, rel=1e-15)
    assert abs(res.value - want) / want < 1e-12


def test_sec_p1_reduces():
    n, k = 5, 2
    a = epsilon_derivation(EpsilonInputs("sec", n, 1, k, S("1/4"), 2))
    assert a.weight == n
    ck = (2 * k * n - n + 2) / (n * k * k)
    assert a.value == pytest.approx(ck * a.sobolev_a / n, rel=1e-14)


GRID = [mpq(i, 3) for i in range(10)]
DELTAS = [mpq(i + 1, 4) for i in range(10)]


@pytest.mark.parametrize("variant", EPSILON_VARIANTS)
@pytest.mark.parametrize("n, p, k", [(4, 1, 1), (6, 3, mpq(3, 2)), (7, 2, 2)])
def test_epsilon_positive_and_monotone(variant, n, p, k):
    grid = [[epsilon(EpsilonInputs(variant, n, p, k, h, d)) for d in DELTAS] for h in GRID]
    assert all(v > 0 for row in grid for v in row)
    if variant == "scal-lowk":
        # H0 does not enter and delta0 is capped, so only weak monotonicity holds
        for row in grid:
            assert all(a <= b for a, b in zip(row, row[1:]))
        for col in zip(*grid):
            assert all(a == b for a, b in zip(col, col[1:]))
        return
    for row in grid:
        assert all(a < b for a, b in zip(row, row[1:]))
    for col in zip(*grid):
        assert all(a > b for a, b in zip(col, col[1:]))


@pytest.mark.parametrize(
    "args",
    [
        ("nope", 4, 1, 1, 0, 1),
        ("ricci", 3, 1, 1, 0, 1),
        ("sec", 2, 1, 1, 0, 1),
        ("scal", 4, 1, 1, 0, 0),
        ("scal", 4, 1, 1, -1, 1),
        ("scal-lowk", 4, 1, 2, 0, 1),
        ("sec", 4, 1, mpq(1, 2), 0, 1),
    ],
)
def test_epsilon_input_errors(args):
    with pytest.raises(ValueError):
        EpsilonInputs(*args)


def test_epsilon_trace_json():
    res = epsilon_derivation(EpsilonInputs("ricci", 4, 1, 1, 0, 1))
    d = json.loads(dumps(res))
    assert d["derivation"]["t"]["value"] == "1/24"
    assert d["derivation"]["sobolev_B"]["value"] == "8/3"
    assert d["value"]["exact"] is False
    assert any("rho" in s for s in d["notes"])
