from __future__ import annotations

import json

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from kextremal.algebra import Scalar
from kextremal.isoparametric import enumerate_tori
from kextremal.jsonio import dumps
from kextremal.models import (
    MODEL_TAGS,
    ModelSubmanifold,
    catalog,
    clifford,
    parse_model,
    round_sphere,
    torus,
    veronese_surface,
    willmore,
)


def test_tags():
    assert set(MODEL_TAGS) == {"round_sphere", "clifford", "willmore", "torus", "veronese"}


def test_veronese():
    v = veronese_surface()
    assert (v.n, v.p, v.ambient_dim) == (2, 2, 4)
    s = v.curvatures()
    # intrinsically a sphere of radius sqrt(3)
    assert s.k_min == mpq(1, 3) and s.scalar_curv == mpq(2, 3)
    assert s.S == mpq(4, 3) and s.mean_norm_sq == 0
    for k in (1, mpq(3, 2), 4):
        assert v.is_k_extremal(k)


@pytest.mark.parametrize("n", [2, 3, 6])
@pytest.mark.parametrize("H", [0, mpq(1, 2), Scalar.parse("sqrt(2)")])
def test_round_sphere(n, H):
    s = round_sphere(n, H)
    c = s.curvatures()
    assert c.k_min == 1 + Scalar.coerce(H) ** 2
    assert c.rho_sq == 0
    assert all(s.is_k_extremal(k) for k in (1, 2, mpq(5, 2)))


def _product_geometry_ok(model: ModelSubmanifold, m: int, r1_sq):
    """Gauss equation against intrinsic product geometry: factor curvatures 1/r^2, mixed planes flat."""
    (l1, m1), (l2, m2) = model.geometry.entries
    assert (m1, m2) == (m, model.n - m)
    r2_sq = 1 - Scalar.coerce(r1_sq)
    assert 1 + l1 * l2 == 0
    if m > 1:
        assert (1 + l1 * l1) * r1_sq == 1
    if model.n - m > 1:
        assert (1 + l2 * l2) * r2_sq == 1
    assert l1 * l1 == r2_sq / r1_sq


@pytest.mark.parametrize("m, rest", [(1, 1), (1, 3), (2, 2), (3, 5), (4, 1)])
def test_product_models_geometry(m, rest):
    n = m + rest
    _product_geometry_ok(clifford(m, rest), m, mpq(m, n))
    _product_geometry_ok(willmore(m, rest), m, mpq(rest, n))


@given(m=st.integers(1, 8), rest=st.integers(1, 8))
def test_clifford_minimal_willmore_not(m, rest):
    assert clifford(m, rest).geometry.mean == 0
    w = willmore(m, rest).geometry
    assert (w.mean == 0) == (m == rest)


@pytest.mark.parametrize("n", range(2, 11))
def test_product_extremality_matches_torus_list(n):
    for k2 in range(2, 2 * n + 1):
        k = mpq(k2, 2)
        found = {t.radius_sq_first: t.m for t in enumerate_tori(n, k)}
        for m in range(1, n):
            c = clifford(m, n - m)
            w = willmore(m, n - m)
            assert c.is_k_extremal(k) == (found.get(mpq(m, n)) == m)
            assert w.is_k_extremal(k) == (found.get(mpq(n - m, n)) == m)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_willmore_extremal_at_half_dimension(n):
    for m in range(1, n):
        assert willmore(m, n - m).is_k_extremal(mpq(n, 2))


def test_torus_model():
    t = torus(10, 3, 1)
    assert t.label == "torus:10,3,1"
    assert t.is_k_extremal(1)
    s = t.curvatures()
    assert s.mean_norm_sq == mpq(16, 125) and s.rho_sq == mpq(378, 25)
    with pytest.raises(ValueError, match="no k-extremal torus"):
        torus(8, 1, 3)


@pytest.mark.parametrize(
    "text, label",
    [
        ("veronese", "veronese"),
        ("veronese_surface", "veronese"),
        ("sphere:3", "round_sphere:3,0"),
        ("round_sphere:3,1/2", "round_sphere:3,1/2"),
        ("clifford:2,2", "clifford:2,2"),
        ("willmore:1,3", "willmore:1,3"),
        ("torus:9,4,3/2", "torus:9,4,3/2"),
    ],
)
def test_parse_model(text, label):
    assert parse_model(text).label == label


@pytest.mark.parametrize(
    "text", ["nosuch", "clifford:2", "clifford:0,3", "torus:8,1,3", "clifford:a,b", "round_sphere:1"]
)
def test_parse_model_errors(text):
    with pytest.raises(ValueError):
        parse_model(text)


@pytest.mark.parametrize(
    "model",
    [veronese_surface(), clifford(2, 3), round_sphere(4, Scalar.parse("1/2*sqrt(3)")), torus(10, 3, 1)],
    ids=lambda m: m.label,
)
def test_model_json_round_trip(model):
    back = ModelSubmanifold.from_dict(json.loads(dumps(model)))
    assert back == model
    assert catalog(back.tag, *back.params) == model
