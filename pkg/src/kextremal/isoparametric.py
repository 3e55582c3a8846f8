"""Isoparametric hypersurfaces: cotangent ladders and k-extremal classification.

Spectra are parameterized by the largest principal curvature ``lambda_1 =
cot(theta)`` rather than the angle itself, so every closed-form case stays
inside one quadratic field and is solved exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import Scalar, as_rational, sqrt_exact
from .tensors import PrincipalSpectrum, check_k

__all__ = [
    "IsoClassification",
    "IsoSpectrum",
    "TorusSolution",
    "classify",
    "cot_shifts",
    "enumerate_tori",
    "extremality_residual",
    "g4_admissible",
    "g4_polynomial",
    "lambda1_lower_bound",
    "product_spectrum",
    "solve_g1",
    "solve_g2",
    "solve_g2_family",
    "solve_g3",
    "solve_g4",
    "solve_g6",
    "spectrum_from_lambda1",
    "torus_obstruction",
]

_SQRT3 = Scalar(0, 1, 3)
_INV_SQRT3 = Scalar(0, mpq(1, 3), 3)

# cot(j*pi/g) for j = 1, ..., g-1
_COT_SHIFTS = {
    1: (),
    2: (Scalar(0),),
    3: (_INV_SQRT3, -_INV_SQRT3),
    4: (Scalar(1), Scalar(0), Scalar(-1)),
    6: (_SQRT3, _INV_SQRT3, Scalar(0), -_INV_SQRT3, -_SQRT3),
}

# lambda_1 = cot(theta) with theta in (0, pi/g)
_LOWER = {2: Scalar(0), 3: _INV_SQRT3, 4: Scalar(1), 6: _SQRT3}


def cot_shifts(g: int) -> tuple[Scalar, ...]:
    if g not in _COT_SHIFTS:
        raise ValueError(f"g must be one of 1, 2, 3, 4, 6; got {g}")
    return _COT_SHIFTS[g]


def lambda1_lower_bound(g: int) -> Scalar | None:
    """Strict lower bound ``cot(pi/g)`` on the generating curvature (None for g = 1)."""
    cot_shifts(g)
    return _LOWER.get(g)


def _expand_multiplicities(g: int, mult) -> tuple[int, ...]:
    mult = tuple(int(m) for m in mult)
    if any(m < 1 for m in mult):
        raise ValueError(f"multiplicities must be positive, got {mult}")
    if g in (1, 3, 6) and len(mult) == 1:
        mult = mult * g
    elif g == 4 and len(mult) == 2:
        mult = mult * 2
    if len(mult) != g:
        raise ValueError(f"g = {g} needs {g} multiplicities, got {len(mult)}")
    if g in (3, 6) and len(set(mult)) != 1:
        raise ValueError(f"g = {g} requires equal multiplicities, got {mult}")
    if g == 4 and (mult[0] != mult[2] or mult[1] != mult[3]):
        raise ValueError(f"g = 4 requires m1 = m3 and m2 = m4, got {mult}")
    return mult


@dataclass(frozen=True)
class IsoSpectrum:
    g: int
    multiplicities: tuple[int, ...]
    lambda1: Scalar
    spectrum: PrincipalSpectrum

    @property
    def curvatures(self) -> tuple[Scalar, ...]:
        return self.spectrum.curvatures

    @property
    def n(self) -> int:
        return self.spectrum.n

    @property
    def is_minimal(self) -> bool:
        total = self.spectrum.power_sum(1)
        if total.is_exact:
            return total == 0
        return abs(float(total)) < 1e-10

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "n": self.n,
            "multiplicities": list(self.multiplicities),
            "lambda1": self.lambda1,
            "curvatures": list(self.curvatures),
            "minimal": self.is_minimal,
        }


def spectrum_from_lambda1(g: int, multiplicities, lambda1) -> IsoSpectrum:
    """Principal curvatures ``cot(theta + (a-1) pi / g)`` from ``lambda_1 = cot(theta)``.

    Uses ``cot(x + y) = (cot x cot y - 1) / (cot x + cot y)``.
    """
    shifts = cot_shifts(g)
    mult = _expand_multiplicities(g, multiplicities)
    lam = Scalar.coerce(lambda1)
    low = _LOWER.get(g)
    if low is not None and not lam > low:
        raise ValueError(
            f"g = {g} requires lambda_1 > cot(pi/{g}) = {low}; got lambda_1 = {lam}"
        )
    curv = [lam] + [(lam * c - 1) / (lam + c) for c in shifts]
    spectrum = PrincipalSpectrum(tuple(zip(curv, mult)))
    return IsoSpectrum(g, mult, lam, spectrum)


def extremality_residual(spectrum: PrincipalSpectrum, k) -> Scalar:
    """``sum l^3 + (n^2/2k) H^3 - (n/2k + 1) H S``; zero iff k-extremal."""
    k = check_k(k)
    n = spectrum.n
    H = spectrum.mean
    S = spectrum.S
    c = Scalar(mpq(n, 1) / (2 * k))
    return spectrum.power_sum(3) + n * c * H**3 - (c + 1) * H * S


def product_spectrum(m: int, n_minus_m: int, a_sq) -> PrincipalSpectrum:
    """Spectrum of ``S^m(a) x S^(n-m)(sqrt(1 - a^2))``.

    ``-sqrt(1-a^2)/a`` with multiplicity m and ``a/sqrt(1-a^2)`` with
    multiplicity n-m.
    """
    a_sq = as_rational(a_sq)
    if not 0 < a_sq < 1:
        raise ValueError(f"product radius needs 0 < a^2 < 1, got {a_sq}")
    lam = -sqrt_exact((1 - a_sq) / a_sq)
    mu = -1 / lam
    return PrincipalSpectrum(((lam, m), (mu, n_minus_m)))


def torus_obstruction(n: int, m: int, k) -> str | None:
    """Name the violated existence condition for the k-extremal torus, or None."""
    k = check_k(k)
    if n < 2:
        return f"n >= 2 required, got n = {n}"
    if not 1 <= m <= n - 1:
        return f"1 <= m <= n-1 violated: m = {m}, n = {n}"
    if 4 * k == n:
        if 2 * m != n:
            return f"k = n/4 = {k} requires m = n/2 = {mpq(n, 2)}, got m = {m}"
        return None
    if 4 * k > n:
        if not n - 2 * k < m < 2 * k:
            return f"k > n/4 requires n-2k < m < 2k, i.e. {n - 2 * k} < {m} < {2 * k}"
        return None
    if not 2 * k < m < n - 2 * k:
        return f"k < n/4 requires 2k < m < n-2k, i.e. {2 * k} < {m} < {n - 2 * k}"
    return None


@dataclass(frozen=True)
class TorusSolution:
    n: int
    m: int
    k: mpq
    radius_sq_first: Scalar
    spectrum: PrincipalSpectrum
    H_sq: Scalar
    rho_sq: Scalar

    @property
    def identity_rhs(self) -> Scalar:
        """``n + n (n/2k - 1) H^2``, which equals rho^2 on every such torus."""
        return self.n + self.n * (Scalar(mpq(self.n) / (2 * self.k)) - 1) * self.H_sq

    @property
    def rho_identity_holds(self) -> bool:
        return self.rho_sq == self.identity_rhs

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "k": Scalar(self.k),
            "radius_sq_first": self.radius_sq_first,
            "spectrum": [
                {"curvature": lam, "multiplicity": mult}
                for lam, mult in self.spectrum.entries
            ],
            "H_sq": self.H_sq,
            "rho_sq": self.rho_sq,
            "rho_identity_holds": self.rho_identity_holds,
            "extremality_residual": extremality_residual(self.spectrum, self.k),
        }


def solve_g2(n: int, m: int, k) -> TorusSolution | None:
    """The k-extremal torus ``T_{m,k}`` in dimension n, or None if it does not exist.

    Call :func:`torus_obstruction` for the reason of a None result.
    """
    k = check_k(k)
    if torus_obstruction(n, m, k) is not None:
        return None
    a_sq = mpq(1, 2) if 4 * k == n else (m - 2 * k) / (n - 4 * k)
    spectrum = product_spectrum(m, n - m, a_sq)
    H = spectrum.mean
    H_sq = H * H
    rho_sq = spectrum.S - n * H_sq
    return TorusSolution(n, m, k, Scalar(a_sq), spectrum, H_sq, rho_sq)


def enumerate_tori(n: int, k) -> list[TorusSolution]:
    k = check_k(k)
    out = []
    for m in range(1, n):
        sol = solve_g2(n, m, k)
        if sol is not None:
            out.append(sol)
    return out


@dataclass(frozen=True)
class IsoClassification:
    """Outcome of a k-extremality classification for fixed g, multiplicities, k.

    ``outcome`` is ``"unique"`` (``solutions`` lists the extremal spectra),
    ``"all"`` (every member of the family is k-extremal) or ``"none"``.
    """

    g: int
    multiplicities: tuple[int, ...]
    k: mpq
    outcome: str
    solutions: tuple[IsoSpectrum, ...] = ()
    roots: tuple[Scalar, ...] = ()
    polynomial: tuple[mpq, ...] = ()
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def n(self) -> int:
        return sum(self.multiplicities)

    @property
    def minimal(self) -> bool | None:
        if self.outcome != "unique":
            return None
        return all(s.is_minimal for s in self.solutions)

    def to_dict(self) -> dict:
        out = {
            "g": self.g,
            "n": self.n,
            "multiplicities": list(self.multiplicities),
            "k": Scalar(self.k),
            "outcome": self.outcome,
            "minimal": self.minimal,
            "solutions": [s.to_dict() for s in self.solutions],
            "notes": list(self.notes),
        }
        if self.g == 4:
            out["polynomial"] = [Scalar(c) for c in self.polynomial]
            out["roots_A_sq"] = list(self.roots)
        return out


def _all_outcome_note(g: int) -> str:
    return f"every lambda_1 > {_LOWER[g]} gives a k-extremal hypersurface"


def solve_g1(n: int, k) -> IsoClassification:
    """Umbilical hypersurfaces: rho vanishes, so each one is k-extremal."""
    k = check_k(k)
    if n < 2:
        raise ValueError(f"n >= 2 required, got n = {n}")
    return IsoClassification(
        1, (n,), k, "all", notes=("every totally umbilical hypersurface is k-extremal",)
    )


def solve_g2_family(m1: int, m2: int, k) -> IsoClassification:
    """g = 2 with lambda_1 > 0 of multiplicity m1: the torus ``T_{m1,k}`` seen from the other normal."""
    k = check_k(k)
    mult = _expand_multiplicities(2, (m1, m2))
    n = m1 + m2
    sol = solve_g2(n, m1, k)
    if sol is None:
        return IsoClassification(2, mult, k, "none", notes=(torus_obstruction(n, m1, k),))
    lam = -sol.spectrum.curvatures[0]
    return IsoClassification(2, mult, k, "unique", (spectrum_from_lambda1(2, mult, lam),))


def classify(g: int, multiplicities, k) -> IsoClassification:
    """Dispatch on g; ``multiplicities`` may be abbreviated (one value for g = 3, 6)."""
    mult = tuple(int(m) for m in multiplicities)
    if g == 1:
        if len(mult) != 1:
            raise ValueError(f"g = 1 takes a single multiplicity n, got {mult}")
        return solve_g1(mult[0], k)
    if g == 2:
        if len(mult) != 2:
            raise ValueError(f"g = 2 takes two multiplicities, got {mult}")
        return solve_g2_family(mult[0], mult[1], k)
    if g in (3, 6):
        full = _expand_multiplicities(g, mult)
        return solve_g3(full[0], k) if g == 3 else solve_g6(full[0], k)
    if g == 4:
        full = _expand_multiplicities(4, mult)
        return solve_g4(full[0], full[1], k)
    raise ValueError(f"g must be one of 1, 2, 3, 4, 6; got {g}")


def solve_g3(m: int, k) -> IsoClassification:
    """g = 3, equal multiplicities m in {1, 2, 4, 8}."""
    k = check_k(k)
    if m not in (1, 2, 4, 8):
        raise ValueError(f"g = 3 requires m in {{1, 2, 4, 8}}, got m = {m}")
    mult = (m,) * 3
    if 2 * k == m:
        return IsoClassification(3, mult, k, "all", notes=(_all_outcome_note(3),))
    return IsoClassification(3, mult, k, "unique", (spectrum_from_lambda1(3, mult, _SQRT3),))


def solve_g6(m: int, k) -> IsoClassification:
    """g = 6, equal multiplicities m in {1, 2}."""
    k = check_k(k)
    if m not in (1, 2):
        raise ValueError(f"g = 6 requires m in {{1, 2}}, got m = {m}")
    mult = (m,) * 6
    if 2 * k == m:
        return IsoClassification(6, mult, k, "all", notes=(_all_outcome_note(6),))
    lam = Scalar(2, 1, 3)
    return IsoClassification(6, mult, k, "unique", (spectrum_from_lambda1(6, mult, lam),))


def g4_polynomial(m1: int, m2: int, k) -> tuple[mpq, mpq, mpq]:
    """Coefficients (a, b, c) of ``a x^2 + b x + c`` whose positive roots are ``A^2``."""
    k = as_rational(k)
    a = (2 * k - m1) * m1 * (m1 + 2 * m2)
    b = mpq(4 * m1 * m2 * (m2 - m1))
    c = -16 * (2 * k - m2) * m2 * (2 * m1 + m2)
    return a, b, c


def _xi(l: int) -> int:
    return sum(1 for s in range(1, l + 1) if s % 8 in (0, 1, 2, 4))


def g4_admissible(m1: int, m2: int) -> bool:
    """Multiplicity filter for g = 4 families; advisory only."""
    if (m1, m2) in ((2, 2), (4, 5)):
        return True
    return (m1 + m2 + 1) % (2 ** _xi(m1 - 1)) == 0


def _positive_roots(a, b, c) -> list[Scalar]:
    if a == 0:
        if b == 0:
            return []
        x = Scalar(-c / b)
        return [x] if x > 0 else []
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    root = sqrt_exact(disc)
    cands = {(-b + root) / (2 * a), (-b - root) / (2 * a)}
    return sorted((x for x in cands if x > 0), key=float)


def solve_g4(m1: int, m2: int, k) -> IsoClassification:
    """g = 4 with multiplicities (m1, m2, m1, m2).

    Each positive root x = A^2 gives lambda_1 > 1 with ``lambda_1 - 1/lambda_1
    = A``.  Spectra are exact when A and sqrt(A^2 + 4) share a quadratic
    field, flagged floats otherwise.
    """
    k = check_k(k)
    if m1 < 1 or m2 < 1:
        raise ValueError(f"multiplicities must be positive, got ({m1}, {m2})")
    mult = (m1, m2, m1, m2)
    a, b, c = g4_polynomial(m1, m2, k)
    notes = []
    if not g4_admissible(m1, m2):
        notes.append(f"advisory: ({m1}, {m2}) fails the known g = 4 multiplicity condition")
    if m1 < m2 and (m1 <= k <= m2) != (m1 <= 2 * k <= m2):
        notes.append(
            "root window follows the polynomial (m1 <= 2k <= m2), which differs here "
            "from the window m1 <= k <= m2"
        )
    if a == b == c == 0:
        notes.append(_all_outcome_note(4))
        return IsoClassification(4, mult, k, "all", polynomial=(a, b, c), notes=tuple(notes))
    roots = _positive_roots(a, b, c)
    sols = []
    for x in roots:
        A = x.sqrt()
        lam = (A + (x + 4).sqrt()) / 2
        sols.append(spectrum_from_lambda1(4, mult, lam))
    outcome = "unique" if sols else "none"
    return IsoClassification(
        4, mult, k, outcome, tuple(sols), tuple(roots), (a, b, c), tuple(notes)
    )
