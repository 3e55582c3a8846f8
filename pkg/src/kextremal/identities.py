"""Randomized oracles for the matrix inequalities and pointwise tensor identities.

Every trial draws from its own stream ``default_rng([seed, suite, trial])`` so
reports do not depend on execution order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import Scalar, sgn
from .tensors import (
    SecondFundamentalForm,
    commutator_norms,
    gauss_tensor,
    normal_curvature,
    ricci_tensor,
)

__all__ = [
    "IDENTITY_SUITES",
    "LEMMA_SUITES",
    "Check",
    "TrialConfig",
    "TrialReport",
    "chen_checks",
    "chen_mixed_check",
    "chen_quartic_check",
    "ddvv_check",
    "ddvv_equality_witness",
    "einstein_decomposition_check",
    "gauss_contraction_check",
    "identity_residuals",
    "itoh_check",
    "lili_check",
    "normal_identity_check",
    "okumura_check",
    "okumura_equality_witness",
    "random_orthogonal",
    "run_identity_suite",
    "run_lemma_suite",
    "verify_identities",
    "verify_lemmas",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Check:
    """One inequality instance ``lhs <= rhs``.

    ``scale`` is a quantity of the same homogeneity as both sides, so that
    rounding on a side that vanishes exactly (e.g. n = 2) is not amplified.
    """

    lhs: float
    rhs: float
    scale: float

    @property
    def violation(self) -> float:
        """Excess of lhs over rhs relative to ``scale`` (0 when the inequality holds)."""
        if self.scale == 0.0:
            return 0.0
        return max(0.0, self.lhs - self.rhs) / self.scale

    def ok(self, tol: float = 1e-9) -> bool:
        return self.violation <= tol

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)


# -- the inequalities ---------------------------------------------------------

def _vec(a) -> np.ndarray:
    return np.asarray(a, dtype=float).ravel()


def okumura_check(a) -> Check:
    """``|sum a^3| <= (n-2)/sqrt(n(n-1)) (sum a^2)^(3/2)`` for trace-free a."""
    a = _vec(a)
    n = a.size
    lhs = abs(float(np.sum(a**3)))
    cube = float(np.sum(a**2)) ** 1.5
    return Check(lhs, (n - 2) / math.sqrt(n * (n - 1)) * cube, cube)


def chen_mixed_check(a, b) -> Check:
    """``|sum a b^2| <= sqrt(sum b^4 - (sum b^2)^2 / n) sqrt(sum a^2)`` for trace-free a."""
    a, b = _vec(a), _vec(b)
    n = a.size
    b2 = b**2
    inner = max(float(np.sum(b2**2)) - float(np.sum(b2)) ** 2 / n, 0.0)
    lhs = abs(float(np.dot(a, b2)))
    norm_a = math.sqrt(float(np.sum(a**2)))
    rhs = math.sqrt(inner) * norm_a
    return Check(lhs, rhs, math.sqrt(float(np.sum(b2**2))) * norm_a)


def chen_quartic_check(b) -> Check:
    """``sum b^4 - B^2/n <= (n-2)^2/(n(n-1)) B^2`` for trace-free b, ``B = sum b^2``."""
    b = _vec(b)
    n = b.size
    B = float(np.sum(b**2))
    lhs = float(np.sum(b**4)) - B * B / n
    return Check(lhs, (n - 2) ** 2 / (n * (n - 1)) * B * B, B * B)


def chen_checks(a, b) -> tuple[Check, Check]:
    return chen_mixed_check(a, b), chen_quartic_check(b)


def _mats(B) -> np.ndarray:
    B = np.asarray(B, dtype=float)
    if B.ndim == 2:
        B = B[None]
    return B


def _gram(B: np.ndarray) -> np.ndarray:
    return np.einsum("aij,bij->ab", B, B)


def ddvv_check(B) -> Check:
    """``sum_{r,s} N([B_r, B_s]) <= (sum_r N(B_r))^2``."""
    B = _mats(B)
    lhs = float(np.sum(commutator_norms(B)))
    rhs = float(np.trace(_gram(B))) ** 2
    return Check(lhs, rhs, rhs)


def itoh_check(B) -> Check:
    """``sum N([B_r, B_s]) <= n sum (tr B_r B_s)^2``."""
    B = _mats(B)
    n = B.shape[1]
    lhs = float(np.sum(commutator_norms(B)))
    G = _gram(B)
    return Check(lhs, n * float(np.sum(G**2)), n * float(np.trace(G)) ** 2)


def lili_check(B) -> Check:
    """``sum N([B_r,B_s]) + sum (tr B_r B_s)^2 <= (1 + sgn(p-1)/2) (sum N(B_r))^2``."""
    B = _mats(B)
    p = B.shape[0]
    G = _gram(B)
    lhs = float(np.sum(commutator_norms(B))) + float(np.sum(G**2))
    total = float(np.trace(G)) ** 2
    return Check(lhs, (1 + 0.5 * sgn(p - 1)) * total, total)


# -- equality witnesses ---------------------------------------------------------

def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def ddvv_equality_witness(n: int, p: int, mu: float, seed: int = 0) -> np.ndarray:
    """Two rotated ``mu``-scaled Pauli-type blocks, remaining matrices zero."""
    if n < 2 or p < 2:
        raise ValueError(f"the witness needs n >= 2 and p >= 2, got n = {n}, p = {p}")
    rng = np.random.default_rng([seed & _MASK64, n, p])
    P = random_orthogonal(n, rng)
    B = np.zeros((p, n, n))
    B[0, 0, 1] = B[0, 1, 0] = mu
    B[1, 0, 0], B[1, 1, 1] = mu, -mu
    return np.einsum("ij,ajk,lk->ail", P, B, P)


def okumura_equality_witness(n: int, scale: float) -> np.ndarray:
    """Trace-free vector with n-1 equal entries."""
    a = np.full(n, -1.0)
    a[0] = n - 1.0
    return scale * a


# -- tensor identities ---------------------------------------------------------

def _float_form(h) -> np.ndarray:
    if isinstance(h, SecondFundamentalForm):
        return np.asarray(h.astype_float().matrices)
    return _mats(h)


def _split(A: np.ndarray):
    n = A.shape[1]
    H = np.einsum("aii->a", A) / n
    At = A - H[:, None, None] * np.eye(n)
    return n, H, At


def normal_identity_check(h) -> tuple[float, float]:
    """Residuals of the normal-curvature contraction against ``-1/2 sum N([A_a, A_b])``.

    Returns the residual with the shape operators and with their traceless parts.
    """
    A = _float_form(h)
    _, _, At = _split(A)
    Rn = normal_curvature(SecondFundamentalForm(A))
    lhs = float(np.einsum("aij,bki,bajk->", A, A, Rn))
    full = lhs + 0.5 * float(np.sum(commutator_norms(A)))
    tilde = lhs + 0.5 * float(np.sum(commutator_norms(At)))
    return full, tilde


def gauss_contraction_check(h) -> float:
    A = _float_form(h)
    n, H, At = _split(A)
    R = gauss_tensor(SecondFundamentalForm(A))
    lhs = float(
        np.einsum("aij,akl,lijk->", A, A, R) + np.einsum("aij,ali,lkjk->", A, A, R)
    )
    st = _gram(At)
    rho2 = float(np.trace(st))
    H2 = float(H @ H)
    rhs = (
        n * (1 + H2) * rho2
        - float(np.sum(st**2))
        + n * float(np.einsum("a,aij,bjk,bki->", H, At, At, At))
        - 0.5 * float(np.sum(commutator_norms(At)))
    )
    return lhs - rhs


def einstein_decomposition_check(h, sign: int = 1) -> np.ndarray:
    """Per-normal residual of the Ricci contraction.

    ``sum_b tr(A_a A_b^2) - sum_b H^b s_ab - sign * [sum h^a_ij R_ij
    - n(n-1) H^a - (n-1) sum_b H^b s_ab]``.  With the Ricci tensor of the
    Gauss equation the bracket equals minus the left side, so only
    ``sign = -1`` vanishes identically; ``sign = 1`` is the stated form.
    """
    A = _float_form(h)
    n, H, _ = _split(A)
    sig = _gram(A)
    Ric = ricci_tensor(SecondFundamentalForm(A))
    lhs = np.einsum("aij,bjk,bki->a", A, A, A) - sig @ H
    bracket = np.einsum("aij,ij->a", A, Ric) - n * (n - 1) * H - (n - 1) * (sig @ H)
    return lhs - sign * bracket


def identity_residuals(h) -> dict[str, float]:
    """Max-abs residual of every pointwise identity on one form."""
    A = _float_form(h)
    n, H, At = _split(A)
    sig, st = _gram(A), _gram(At)
    H2 = float(H @ H)
    rho2 = float(np.trace(st))
    out = {}
    out["sigma-split"] = float(np.max(np.abs(sig - st - n * np.outer(H, H))))
    out["mean-sigma-contraction"] = abs(float(H @ sig @ H - H @ st @ H - n * H2 * H2))
    cubic = float(np.einsum("a,aij,bjk,bki->", H, A, A, A))
    cubic_t = float(np.einsum("a,aij,bjk,bki->", H, At, At, At))
    out["cubic-mean-expansion"] = abs(
        cubic - (cubic_t + 2 * float(H @ st @ H) + H2 * rho2 + n * H2 * H2)
    )
    full, tilde = normal_identity_check(A)
    out["normal-curvature-contraction"] = max(abs(full), abs(tilde))
    out["gauss-contraction"] = abs(gauss_contraction_check(A))
    out["ricci-contraction"] = float(np.max(np.abs(einstein_decomposition_check(A, 1))))
    out["ricci-contraction-negated"] = float(
        np.max(np.abs(einstein_decomposition_check(A, -1)))
    )
    R = gauss_tensor(SecondFundamentalForm(A))
    scal = float(np.einsum("ijij->", R))
    out["scalar-curvature"] = abs(scal - (n * (n - 1) + n * n * H2 - float(np.sum(A * A))))
    return out


# -- harness ------------------------------------------------------------------

LEMMA_SUITES = ("okumura", "chen-mixed", "chen-quartic", "ddvv", "itoh", "lili")
WITNESS_SUITES = ("okumura-equality", "ddvv-equality", "lili-equality")
IDENTITY_SUITES = (
    "sigma-split",
    "mean-sigma-contraction",
    "cubic-mean-expansion",
    "normal-curvature-contraction",
    "gauss-contraction",
    "ricci-contraction",
    "ricci-contraction-negated",
    "scalar-curvature",
)


@dataclass(frozen=True)
class TrialConfig:
    trials: int = 10_000
    n_max: int = 6
    p_max: int = 4
    seed: int = 0
    entry_bound: float = 1.0
    tolerance: float = 1e-9
    n_min: int = 2

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 2 <= self.n_min <= self.n_max:
            raise ValueError(f"need 2 <= n_min <= n_max, got {self.n_min}, {self.n_max}")
        if self.p_max < 1:
            raise ValueError(f"p_max must be >= 1, got {self.p_max}")
        if not self.entry_bound > 0:
            raise ValueError(f"entry_bound must be positive, got {self.entry_bound}")
        if not self.tolerance >= 0:
            raise ValueError(f"tolerance must be non-negative, got {self.tolerance}")

    def rng(self, suite: str, trial: int) -> np.random.Generator:
        tag = _SUITE_INDEX[suite]
        return np.random.default_rng([self.seed & _MASK64, tag, trial])

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "n_max": self.n_max,
            "p_max": self.p_max,
            "seed": self.seed,
            "entry_bound": Scalar.from_float(self.entry_bound),
            "tolerance": Scalar.from_float(self.tolerance),
        }


_SUITE_INDEX = {
    name: i for i, name in enumerate(LEMMA_SUITES + WITNESS_SUITES + IDENTITY_SUITES)
}


@dataclass(frozen=True)
class TrialReport:
    lemma: str
    trials: int
    max_violation: float
    witness: dict
    passed: bool
    tolerance: float
    seed: int
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": Scalar.from_float(self.tolerance),
            "max_violation": Scalar.from_float(self.max_violation),
            "passed": self.passed,
            "witness": self.witness,
            "notes": list(self.notes),
        }


def _floats(x) -> list:
    return np.asarray(x, dtype=float).tolist()


def _draw_vector(cfg: TrialConfig, rng, trace_free: bool) -> np.ndarray:
    n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
    a = rng.uniform(-cfg.entry_bound, cfg.entry_bound, n)
    return a - a.mean() if trace_free else a


def _draw_matrices(cfg: TrialConfig, rng, n_max=None, p_max=None) -> np.ndarray:
    n = int(rng.integers(cfg.n_min, (n_max or cfg.n_max) + 1))
    p = int(rng.integers(1, (p_max or cfg.p_max) + 1))
    M = rng.uniform(-cfg.entry_bound, cfg.entry_bound, (p, n, n))
    return (M + M.transpose(0, 2, 1)) / 2


def _lemma_trial(suite: str, cfg: TrialConfig, rng):
    """Returns (Check, witness inputs)."""
    if suite == "okumura":
        a = _draw_vector(cfg, rng, True)
        return okumura_check(a), {"a": _floats(a)}
    if suite == "chen-mixed":
        a = _draw_vector(cfg, rng, True)
        b = rng.uniform(-cfg.entry_bound, cfg.entry_bound, a.size)
        return chen_mixed_check(a, b), {"a": _floats(a), "b": _floats(b)}
    if suite == "chen-quartic":
        b = _draw_vector(cfg, rng, True)
        return chen_quartic_check(b), {"b": _floats(b)}
    B = _draw_matrices(cfg, rng)
    check = {"ddvv": ddvv_check, "itoh": itoh_check, "lili": lili_check}[suite](B)
    return check, {"matrices": _floats(B)}


def _witness_trial(suite: str, cfg: TrialConfig, rng):
    """Equality cases; the returned Check should have lhs == rhs."""
    if suite == "okumura-equality":
        n = int(rng.integers(max(cfg.n_min, 2), cfg.n_max + 1))
        scale = float(rng.uniform(-cfg.entry_bound, cfg.entry_bound))
        a = okumura_equality_witness(n, scale)
        return okumura_check(a), {"a": _floats(a)}
    n = int(rng.integers(2, cfg.n_max + 1))
    p = int(rng.integers(2, max(cfg.p_max, 2) + 1))
    mu = float(rng.uniform(-cfg.entry_bound, cfg.entry_bound))
    B = ddvv_equality_witness(n, p, mu, seed=int(rng.integers(0, 2**63)))
    check = ddvv_check(B) if suite == "ddvv-equality" else lili_check(B)
    return check, {"matrices": _floats(B)}


def run_lemma_suite(suite: str, cfg: TrialConfig) -> TrialReport:
    """Inequality suites report relative violations; witness suites report |lhs - rhs|."""
    if suite not in LEMMA_SUITES and suite not in WITNESS_SUITES:
        raise ValueError(f"unknown lemma suite {suite!r}")
    equality = suite in WITNESS_SUITES
    worst, witness = -1.0, {}
    for t in range(cfg.trials):
        rng = cfg.rng(suite, t)
        if equality:
            check, inputs = _witness_trial(suite, cfg, rng)
            v = check.gap
        else:
            check, inputs = _lemma_trial(suite, cfg, rng)
            v = check.violation
        if v > worst:
            worst = v
            witness = {"trial": t, "lhs": check.lhs, "rhs": check.rhs, **inputs}
    tol = 1e-12 if equality else cfg.tolerance
    notes = ("max_violation is the absolute gap |lhs - rhs|",) if equality else (
        "max_violation is max(0, lhs - rhs) over a same-degree scale of the inputs",
    )
    return TrialReport(suite, cfg.trials, worst, witness, worst <= tol, tol, cfg.seed, notes)


IDENTITY_TOL = 1e-10


def run_identity_suite(cfg: TrialConfig, suites=IDENTITY_SUITES) -> list[TrialReport]:
    """One pass over ``cfg.trials`` random forms, feeding every identity at once."""
    worst = {s: -1.0 for s in suites}
    witness = {s: {} for s in suites}
    for t in range(cfg.trials):
        # forms share one stream so every identity sees the same inputs
        rng = cfg.rng("sigma-split", t)
        A = _draw_matrices(cfg, rng)
        res = identity_residuals(A)
        for s in suites:
            if res[s] > worst[s]:
                worst[s] = res[s]
                witness[s] = {"trial": t, "residual": res[s], "matrices": _floats(A)}
    notes = {
        "ricci-contraction": (
            "stated form; its bracket equals minus the left side for the Gauss-equation "
            "Ricci tensor, so the residual is twice the left side",
        ),
        "ricci-contraction-negated": ("same contraction with the bracket's sign reversed",),
    }
    return [
        TrialReport(s, cfg.trials, worst[s], witness[s], worst[s] < IDENTITY_TOL,
                    IDENTITY_TOL, cfg.seed, notes.get(s, ()))
        for s in suites
    ]


def verify_lemmas(cfg: TrialConfig, *, witnesses: bool = True) -> list[TrialReport]:
    suites = LEMMA_SUITES + (WITNESS_SUITES if witnesses else ())
    return [run_lemma_suite(s, cfg) for s in suites]


def verify_identities(cfg: TrialConfig) -> list[TrialReport]:
    return run_identity_suite(cfg)
