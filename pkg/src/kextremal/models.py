"""Catalog of model submanifolds with parallel second fundamental form."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .algebra import Scalar, as_rational
from .isoparametric import product_spectrum, solve_g2, torus_obstruction
from .tensors import (
    CurvatureSummary,
    PrincipalSpectrum,
    SecondFundamentalForm,
    gauss_curvatures,
    reduced_el_residual,
)

__all__ = [
    "MODEL_TAGS",
    "ModelSubmanifold",
    "catalog",
    "clifford",
    "parse_model",
    "round_sphere",
    "torus",
    "veronese_surface",
    "willmore",
]


@dataclass(frozen=True)
class ModelSubmanifold:
    tag: str
    params: tuple
    geometry: PrincipalSpectrum | SecondFundamentalForm

    @property
    def is_hypersurface(self) -> bool:
        return isinstance(self.geometry, PrincipalSpectrum)

    def form(self) -> SecondFundamentalForm:
        if self.is_hypersurface:
            return self.geometry.form()
        return self.geometry

    @property
    def n(self) -> int:
        return self.geometry.n

    @property
    def p(self) -> int:
        return 1 if self.is_hypersurface else self.geometry.p

    @property
    def ambient_dim(self) -> int:
        return self.n + self.p

    @property
    def label(self) -> str:
        if not self.params:
            return self.tag
        return f"{self.tag}:" + ",".join(str(x) for x in self.params)

    def curvatures(self, **kw) -> CurvatureSummary:
        return gauss_curvatures(self.form(), **kw)

    def el_residual(self, k) -> tuple[Scalar, ...]:
        return tuple(reduced_el_residual(self.form(), k))

    def is_k_extremal(self, k) -> bool:
        res = self.el_residual(k)
        return all(r == 0 if r.is_exact else abs(float(r)) < 1e-10 for r in res)

    def to_dict(self) -> dict:
        if self.is_hypersurface:
            geom = {
                "kind": "spectrum",
                "entries": [
                    {"curvature": lam, "multiplicity": m} for lam, m in self.geometry.entries
                ],
            }
        else:
            mats = self.geometry.matrices
            geom = {
                "kind": "form",
                "matrices": [[[Scalar.coerce(x) for x in row] for row in a] for a in mats],
            }
        return {
            "tag": self.tag,
            "params": [Scalar.coerce(x) for x in self.params],
            "n": self.n,
            "p": self.p,
            "ambient_dim": self.ambient_dim,
            "geometry": geom,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ModelSubmanifold:
        from .jsonio import scalar_from_json

        geom = data["geometry"]
        if geom["kind"] == "spectrum":
            geometry = PrincipalSpectrum(
                tuple(
                    (scalar_from_json(e["curvature"]), e["multiplicity"])
                    for e in geom["entries"]
                )
            )
        else:
            mats = [
                [[scalar_from_json(x) for x in row] for row in a] for a in geom["matrices"]
            ]
            arr = np.empty((len(mats), len(mats[0]), len(mats[0])), dtype=object)
            for idx, x in np.ndenumerate(np.array(mats, dtype=object)):
                arr[idx] = x
            geometry = SecondFundamentalForm(arr)
        params = tuple(_plain(scalar_from_json(x)) for x in data["params"])
        return cls(data["tag"], params, geometry)


def _plain(x: Scalar):
    if x.is_rational:
        q = x.rational_part
        return int(q) if q.denominator == 1 else mpq(q.numerator, q.denominator)
    return x


def _check_split(m: int, rest: int) -> int:
    if m < 1 or rest < 1:
        raise ValueError(f"product of spheres needs m >= 1 and n-m >= 1, got ({m}, {rest})")
    return m + rest


def round_sphere(n: int, H=0) -> ModelSubmanifold:
    """Totally umbilical hypersurface with constant mean curvature H (H = 0: totally geodesic)."""
    if n < 2:
        raise ValueError(f"n >= 2 required, got {n}")
    H = Scalar.coerce(H)
    if H < 0:
        raise ValueError(f"mean curvature must be non-negative, got {H}")
    return ModelSubmanifold("round_sphere", (n, H), PrincipalSpectrum(((H, n),)))


def clifford(m: int, rest: int) -> ModelSubmanifold:
    """Minimal product ``S^m(sqrt(m/n)) x S^(n-m)(sqrt((n-m)/n))``."""
    n = _check_split(m, rest)
    return ModelSubmanifold("clifford", (m, rest), product_spectrum(m, rest, mpq(m, n)))


def willmore(m: int, rest: int) -> ModelSubmanifold:
    """Product ``S^m(sqrt((n-m)/n)) x S^(n-m)(sqrt(m/n))``."""
    n = _check_split(m, rest)
    return ModelSubmanifold("willmore", (m, rest), product_spectrum(m, rest, mpq(rest, n)))


def torus(n: int, m: int, k) -> ModelSubmanifold:
    k = as_rational(k)
    sol = solve_g2(n, m, k)
    if sol is None:
        raise ValueError(f"no k-extremal torus for (n, m, k) = ({n}, {m}, {k}): "
                         + torus_obstruction(n, m, k))
    return ModelSubmanifold("torus", (n, m, k), sol.spectrum)


def veronese_surface() -> ModelSubmanifold:
    """Veronese surface in S^4, normalized so that S = 4/3."""
    mu = Scalar(0, mpq(1, 3), 3)
    zero = Scalar(0)
    mats = np.array(
        [[[zero, mu], [mu, zero]], [[mu, zero], [zero, -mu]]], dtype=object
    )
    return ModelSubmanifold("veronese", (), SecondFundamentalForm(mats))


_BUILDERS = {
    "round_sphere": (round_sphere, (1, 2)),
    "clifford": (clifford, (2,)),
    "willmore": (willmore, (2,)),
    "torus": (torus, (3,)),
    "veronese": (veronese_surface, (0,)),
}
_ALIASES = {
    "sphere": "round_sphere",
    "round-sphere": "round_sphere",
    "veronese_surface": "veronese",
    "veronese-surface": "veronese",
    "ktorus": "torus",
}
MODEL_TAGS = tuple(_BUILDERS)


def catalog(tag: str, *params) -> ModelSubmanifold:
    key = _ALIASES.get(tag, tag)
    if key not in _BUILDERS:
        raise ValueError(f"unknown model tag {tag!r}; known: {', '.join(MODEL_TAGS)}")
    build, arity = _BUILDERS[key]
    if len(params) not in arity:
        want = " or ".join(str(a) for a in arity)
        raise ValueError(f"model {key!r} takes {want} parameters, got {len(params)}")
    return build(*params)


def parse_model(text: str) -> ModelSubmanifold:
    """Build a model from ``tag`` or ``tag:p1,p2,...`` (e.g. ``torus:10,3,1``)."""
    tag, _, rest = text.strip().partition(":")
    raw = [s.strip() for s in rest.split(",")] if rest.strip() else []
    key = _ALIASES.get(tag, tag)
    params = []
    for i, s in enumerate(raw):
        # mean curvature and k may be rational or surd; counts are integers
        if key == "round_sphere" and i == 1:
            params.append(Scalar.parse(s))
        elif key == "torus" and i == 2:
            params.append(as_rational(s))
        else:
            try:
                params.append(int(s))
            except ValueError:
                raise ValueError(f"expected an integer parameter, got {s!r}") from None
    return catalog(tag, *params)
