"""Pinching bounds, model verdicts, Sobolev constants and integral thresholds."""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from gmpy2 import mpq

from .algebra import FLOAT_PREC, Scalar, as_rational, sgn, sqrt_exact
from .models import ModelSubmanifold
from .tensors import check_k

__all__ = [
    "EPSILON_VARIANTS",
    "SATURATION_TOL",
    "EpsilonInputs",
    "EpsilonResult",
    "InvariantError",
    "PinchingReport",
    "TheoremVerdict",
    "c1",
    "c1_prime",
    "c2",
    "c3",
    "epsilon",
    "epsilon_derivation",
    "sobolev_a",
    "sobolev_b",
    "sobolev_c",
    "sobolev_constants",
    "unit_ball_volume",
    "verdict",
]

SATURATION_TOL = 1e-10
EPSILON_VARIANTS = ("sec", "sec-n", "ricci", "scal", "scal-lowk")

_mp = mpmath.MPContext()
_mp.prec = FLOAT_PREC


class InvariantError(RuntimeError):
    """An internal consistency check failed (should be unreachable for valid input)."""


def _sqrt(x: Scalar) -> Scalar:
    x = Scalar.coerce(x)
    if x.is_rational:
        return sqrt_exact(x.rational_part)
    return x.sqrt()


def _nonneg(name: str, x) -> Scalar:
    x = Scalar.coerce(x)
    if x < 0:
        raise ValueError(f"{name} must be non-negative, got {x}")
    return x


def _cross_coeff(n: int) -> Scalar:
    """``(n - 2) / sqrt(n (n - 1))``"""
    return (n - 2) / sqrt_exact(n * (n - 1))


def _excess(n: int, k: mpq) -> Scalar:
    """``n/2k - 1``"""
    return Scalar(mpq(n) / (2 * k) - 1)


def _ddvv_term(p: int) -> Scalar:
    return Scalar(mpq(p * sgn(p - 1), 2 * (p + 1)))


def c1(n: int, p: int, H, rho, k) -> Scalar:
    """Sectional-curvature bound depending on codimension p."""
    k = check_k(k)
    H, rho = _nonneg("H", H), _nonneg("rho", rho)
    q = _ddvv_term(p)
    return q + _cross_coeff(n) * H * rho + (1 - _excess(n, k) * (1 - q)) * H * H


def c1_prime(n: int, H, rho, k) -> Scalar:
    """Sectional-curvature bound independent of codimension."""
    k = check_k(k)
    H, rho = _nonneg("H", H), _nonneg("rho", rho)
    return (
        Scalar(mpq(n, 2 * (n + 1)))
        + _cross_coeff(n) * H * rho
        + (1 - _excess(n, k) * mpq(n + 2, 2 * (n + 1))) * H * H
    )


def c2(n: int, H, rho, k) -> Scalar:
    """Ricci-curvature bound; meaningful for n >= 4."""
    k = check_k(k)
    if n < 4:
        raise ValueError(f"the Ricci bound needs n >= 4, got n = {n}")
    H, rho = _nonneg("H", H), _nonneg("rho", rho)
    return (
        Scalar(n - 2)
        + (n - 2) * _cross_coeff(n) * H * rho
        + n * (1 - 1 / (2 * Scalar(k))) * H * H
    )


def c3(n: int, p: int, H, k) -> Scalar:
    """Upper bound on rho^2."""
    k = check_k(k)
    H = _nonneg("H", H)
    return (n + n * _excess(n, k) * H * H) * Scalar(1 - mpq(sgn(p - 1), 3))


# -- verdicts ---------------------------------------------------------------

STRICT = "hypothesis-holds-strictly"
SATURATED = "saturated"
FAILS = "fails"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class TheoremVerdict:
    quantity: str
    relation: str
    extreme: Scalar
    bound: Scalar | None
    status: str

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "relation": self.relation,
            "extreme": self.extreme,
            "bound": self.bound,
            "status": self.status,
        }


def _compare(value: Scalar, bound: Scalar, lower: bool) -> str:
    """Status of ``value >= bound`` (lower) or ``value <= bound``."""
    diff = value - bound if lower else bound - value
    if diff.is_exact:
        s = diff.sign()
    else:
        d = float(diff)
        s = 0 if abs(d) < SATURATION_TOL else (1 if d > 0 else -1)
    return {1: STRICT, 0: SATURATED, -1: FAILS}[s]


@dataclass(frozen=True)
class PinchingReport:
    model: str
    k: mpq
    n: int
    p: int
    H: Scalar
    rho_sq: Scalar
    k_min: Scalar
    ricci_min: Scalar
    bounds: dict
    verdicts: dict
    el_residual: tuple[Scalar, ...]
    k_extremal: bool
    flags: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "k": Scalar(self.k),
            "n": self.n,
            "p": self.p,
            "extremes": {
                "H": self.H,
                "rho_sq": self.rho_sq,
                "k_min": self.k_min,
                "ricci_min": self.ricci_min,
            },
            "bounds": dict(self.bounds),
            "verdicts": {name: v.to_dict() for name, v in self.verdicts.items()},
            "el_residual": list(self.el_residual),
            "k_extremal": self.k_extremal,
            "flags": list(self.flags),
        }


def verdict(model: ModelSubmanifold, k, *, planes: int | None = None, seed: int = 0) -> PinchingReport:
    """Evaluate each pointwise pinching hypothesis on a model with its own H and rho."""
    k = check_k(k)
    kw = {"seed": seed}
    if planes is not None:
        kw["planes"] = planes
    summ = model.curvatures(**kw)
    n, p = summ.n, summ.p
    H = _sqrt(summ.mean_norm_sq)
    rho = _sqrt(summ.rho_sq)
    flags = list(summ.notes)

    bounds = {
        "C1": c1(n, p, H, rho, k),
        "C1_prime": c1_prime(n, H, rho, k),
        "C3": c3(n, p, H, k),
    }
    verdicts = {
        "thm_sec": TheoremVerdict("k_min", ">=", summ.k_min, bounds["C1"],
                                  _compare(summ.k_min, bounds["C1"], True)),
        "thm_sec_n": TheoremVerdict("k_min", ">=", summ.k_min, bounds["C1_prime"],
                                    _compare(summ.k_min, bounds["C1_prime"], True)),
    }
    if n >= 4:
        bounds["C2"] = c2(n, H, rho, k)
        verdicts["thm_ricci"] = TheoremVerdict(
            "ricci_min", ">=", summ.ricci_min, bounds["C2"],
            _compare(summ.ricci_min, bounds["C2"], True),
        )
    else:
        bounds["C2"] = None
        verdicts["thm_ricci"] = TheoremVerdict("ricci_min", ">=", summ.ricci_min, None, NOT_APPLICABLE)
        flags.append(f"Ricci bound requires n >= 4 (n = {n})")
    verdicts["thm_scal"] = TheoremVerdict(
        "rho_sq", "<=", summ.rho_sq, bounds["C3"], _compare(summ.rho_sq, bounds["C3"], False)
    )

    if summ.k_min_sampled:
        flags.append("k_min sampled: thm_sec verdicts compare an upper bound")
    residual = model.el_residual(k)
    extremal = model.is_k_extremal(k)
    if not extremal:
        flags.append(f"model is not {k}-extremal; verdicts only evaluate the inequalities")
    return PinchingReport(
        model=model.label, k=k, n=n, p=p, H=H, rho_sq=summ.rho_sq,
        k_min=summ.k_min, ricci_min=summ.ricci_min, bounds=bounds,
        verdicts=verdicts, el_residual=residual, k_extremal=extremal, flags=tuple(flags),
    )


# -- Sobolev constants --------------------------------------------------------

def unit_ball_volume(n: int):
    """Volume of the unit ball in R^n as an mpf."""
    half = _mp.mpf(n) / 2
    return _mp.power(_mp.pi, half) / _mp.gamma(half + 1)


def sobolev_c(n: int):
    n_ = _mp.mpf(n)
    return _mp.power(2, n_) * _mp.power(n_ + 1, 1 + 1 / n_) / (
        (n_ - 1) * _mp.power(unit_ball_volume(n), 1 / n_)
    )


def _check_t(n: int, t) -> None:
    if n < 3:
        raise ValueError(f"Sobolev constants need n >= 3, got n = {n}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")


def sobolev_b(n: int, t) -> Scalar:
    """``(n-2)^2 / (4 (n-1)^2 t)``; exact for rational t."""
    t = Scalar.coerce(t)
    _check_t(n, t)
    return Scalar(mpq((n - 2) ** 2, 4 * (n - 1) ** 2)) / t


def sobolev_a(n: int, t):
    """``(n-2)^2 / (4 (n-1)^2 (1+t) C(n)^2)`` as an mpf."""
    t = Scalar.coerce(t)
    _check_t(n, t)
    c = sobolev_c(n)
    return _mp.mpf((n - 2) ** 2) / (4 * (n - 1) ** 2 * (1 + t.to_mpf()) * c * c)


def sobolev_constants(n: int, t) -> tuple[float, Scalar, float, float]:
    """``(A(n,t), B(n,t), C(n), omega_n)``."""
    return (
        float(sobolev_a(n, t)),
        sobolev_b(n, t),
        float(sobolev_c(n)),
        float(unit_ball_volume(n)),
    )


# -- integral thresholds ------------------------------------------------------

@dataclass(frozen=True)
class EpsilonInputs:
    variant: str
    n: int
    p: int
    k: mpq
    H0_sq: Scalar
    delta0: Scalar

    def __post_init__(self):
        if self.variant not in EPSILON_VARIANTS:
            raise ValueError(
                f"unknown variant {self.variant!r}; known: {', '.join(EPSILON_VARIANTS)}"
            )
        object.__setattr__(self, "k", check_k(self.k))
        object.__setattr__(self, "H0_sq", _nonneg("H0^2", self.H0_sq))
        delta0 = Scalar.coerce(self.delta0)
        if not delta0 > 0:
            raise ValueError(f"delta0 must be positive, got {delta0}")
        object.__setattr__(self, "delta0", delta0)
        if self.p < 1:
            raise ValueError(f"p >= 1 required, got {self.p}")
        need = 4 if self.variant == "ricci" else 3
        if self.n < need:
            raise ValueError(f"variant {self.variant!r} needs n >= {need}, got n = {self.n}")
        if self.variant == "scal-lowk" and not 2 * self.k < self.n:
            raise ValueError(f"variant 'scal-lowk' needs k < n/2, got k = {self.k}, n = {self.n}")

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "n": self.n,
            "p": self.p,
            "k": Scalar(self.k),
            "H0_sq": self.H0_sq,
            "delta0": self.delta0,
        }


@dataclass(frozen=True)
class EpsilonResult:
    inputs: EpsilonInputs
    value: float
    t: Scalar
    c_k: Scalar
    weight: Scalar
    rhs: Scalar
    sobolev_a: float
    notes: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "inputs": self.inputs.to_dict(),
            "value": Scalar.from_float(self.value),
            "derivation": {
                "c_k": self.c_k,
                "weight": self.weight,
                "t_equation_rhs": self.rhs,
                "t": self.t,
                "sobolev_B": sobolev_b(self.inputs.n, self.t),
                "sobolev_A": Scalar.from_float(self.sobolev_a),
            },
            "notes": list(self.notes),
        }


def _tau(p: int) -> Scalar:
    return Scalar(1 + mpq(sgn(p - 1), 2))


def epsilon_derivation(inp: EpsilonInputs) -> EpsilonResult:
    """Solve the variant's equation for t, then evaluate the threshold.

    Every variant has the shape ``c_k B(n, t) (1 + H0^2) = rhs`` followed by
    ``epsilon = c_k A(n, t) / weight`` with ``c_k = (2kn - n + 2) / (n k^2)``.
    """
    n, p, k = inp.n, inp.p, inp.k
    c_k = Scalar((2 * k * n - n + 2) / (n * k * k))
    notes = ["threshold is independent of rho; rho enters only through delta0"]
    one_plus = 1 + inp.H0_sq
    v = inp.variant
    if v in ("sec", "sec-n"):
        a = Scalar(mpq(p, p + 2) * sgn(p - 1)) if v == "sec" else Scalar(mpq(n, n + 2))
        weight = (a + 1) * n
        rhs = weight * inp.delta0
    elif v == "ricci":
        weight = Scalar(n)
        rhs = weight * inp.delta0
    elif v == "scal":
        weight = _tau(p)
        rhs = weight * inp.delta0
    else:
        weight = _tau(p)
        cap = Scalar(mpq(n * n) / (2 * k) - n)
        rhs = weight * (cap if cap < inp.delta0 else inp.delta0)
        one_plus = Scalar(1)
        notes.append("H0 does not enter this variant")
    # c_k (n-2)^2 / (4 (n-1)^2 t) * one_plus = rhs
    t = c_k * mpq((n - 2) ** 2, 4 * (n - 1) ** 2) * one_plus / rhs
    if not t > 0:
        raise InvariantError(f"solved t = {t} is not positive")
    check = c_k * sobolev_b(n, t) * one_plus - rhs
    if check.is_exact and check != 0:
        raise InvariantError(f"t does not satisfy its defining equation (residual {check})")
    A = sobolev_a(n, t)
    value = c_k.to_mpf() * A / weight.to_mpf()
    if not value > 0:
        raise InvariantError(f"threshold {value} is not positive")
    return EpsilonResult(inp, float(value), t, c_k, weight, rhs, float(A), tuple(notes))


def epsilon(inp: EpsilonInputs) -> float:
    return epsilon_derivation(inp).value
