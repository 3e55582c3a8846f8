"""Second fundamental forms and the curvature they induce.

A form is stored as a ``(p, n, n)`` numpy array holding either exact
:class:`~kextremal.algebra.Scalar` objects (``dtype=object``) or float64
entries.  Every operation below is written against numpy broadcasting so the
same code runs exactly on Scalars and fast on floats.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .algebra import Scalar, as_rational

__all__ = [
    "CurvatureSummary",
    "FormInvariants",
    "PrincipalSpectrum",
    "SecondFundamentalForm",
    "check_k",
    "commutator_norms",
    "gauss_curvatures",
    "gauss_tensor",
    "invariants",
    "mean_vector",
    "normal_curvature",
    "reduced_el_residual",
    "ricci_tensor",
    "sectional_curvature",
    "sigma",
    "traceless",
]

DEFAULT_PLANES = 10_000
EIGEN_TOL = 1e-12


def check_k(k):
    """Validate the functional exponent ``k`` (rational, ``k >= 1``)."""
    k = as_rational(k)
    if k < 1:
        raise ValueError(f"k must satisfy k >= 1, got k = {k}")
    return k


def _to_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar.coerce(x)


@dataclass(frozen=True)
class PrincipalSpectrum:
    """Principal curvatures of a hypersurface with their multiplicities."""

    entries: tuple[tuple[Scalar, int], ...]
    # memoized power sums; immutable entries make this safe
    _sums: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        clean = []
        for lam, mult in self.entries:
            mult = int(mult)
            if mult < 1:
                raise ValueError(f"multiplicity must be positive, got {mult}")
            clean.append((_to_scalar(lam), mult))
        if not clean:
            raise ValueError("a spectrum needs at least one principal curvature")
        object.__setattr__(self, "entries", tuple(clean))

    @classmethod
    def of(cls, *pairs) -> PrincipalSpectrum:
        return cls(tuple(pairs))

    @property
    def n(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def curvatures(self) -> tuple[Scalar, ...]:
        return tuple(lam for lam, _ in self.entries)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.entries)

    def power_sum(self, e: int) -> Scalar:
        total = self._sums.get(e)
        if total is None:
            total = Scalar(0)
            for lam, m in self.entries:
                total = total + m * lam**e
            self._sums[e] = total
        return total

    @property
    def mean(self) -> Scalar:
        """Signed mean curvature ``(sum of principal curvatures) / n``."""
        return self.power_sum(1) / self.n

    @property
    def S(self) -> Scalar:
        return self.power_sum(2)

    @property
    def is_exact(self) -> bool:
        return all(lam.is_exact for lam in self.curvatures)

    def expanded(self) -> list[Scalar]:
        return [lam for lam, m in self.entries for _ in range(m)]

    def flipped(self) -> PrincipalSpectrum:
        """Spectrum for the opposite unit normal."""
        return PrincipalSpectrum(tuple((-lam, m) for lam, m in self.entries))

    def form(self) -> SecondFundamentalForm:
        n = self.n
        mat = np.empty((1, n, n), dtype=object)
        mat.fill(Scalar(0))
        for i, lam in enumerate(self.expanded()):
            mat[0, i, i] = lam
        return SecondFundamentalForm(mat)

    def __str__(self):
        return ", ".join(f"{lam} x{m}" for lam, m in self.entries)


class SecondFundamentalForm:
    """``p`` symmetric ``n x n`` shape operators ``A_alpha = (h^alpha_ij)``."""

    __slots__ = ("_m",)

    def __init__(self, matrices):
        arr = _as_form_array(matrices)
        if arr.ndim == 2:
            arr = arr[None, :, :]
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"expected a (p, n, n) array, got shape {arr.shape}")
        p, n, _ = arr.shape
        if n < 2 or p < 1:
            raise ValueError(f"need n >= 2 and p >= 1, got n = {n}, p = {p}")
        if arr.dtype == object:
            sym = all(
                arr[a, i, j] == arr[a, j, i]
                for a in range(p)
                for i, j in combinations(range(n), 2)
            )
        else:
            sym = np.array_equal(arr, np.swapaxes(arr, 1, 2))
        if not sym:
            raise ValueError("shape operators must be symmetric")
        arr.flags.writeable = False
        self._m = arr

    @classmethod
    def from_spectrum(cls, spectrum: PrincipalSpectrum) -> SecondFundamentalForm:
        return spectrum.form()

    @property
    def matrices(self) -> np.ndarray:
        return self._m

    @property
    def n(self) -> int:
        return self._m.shape[1]

    @property
    def p(self) -> int:
        return self._m.shape[0]

    @property
    def is_exact(self) -> bool:
        return self._m.dtype == object and all(x.is_exact for x in self._m.flat)

    def is_diagonal(self) -> bool:
        n = self.n
        off = ~np.eye(n, dtype=bool)
        return all(x == 0 for x in self._m[:, off].flat)

    def astype_float(self) -> SecondFundamentalForm:
        if self._m.dtype != object:
            return self
        return SecondFundamentalForm(np.vectorize(float, otypes=[float])(self._m))

    def __eq__(self, other):
        if not isinstance(other, SecondFundamentalForm):
            return NotImplemented
        return self._m.shape == other._m.shape and bool(np.all(self._m == other._m))

    __hash__ = None

    def __repr__(self):
        return f"SecondFundamentalForm(n={self.n}, p={self.p}, exact={self.is_exact})"


def _as_form_array(matrices) -> np.ndarray:
    if isinstance(matrices, np.ndarray) and matrices.dtype.kind in "fiu":
        return np.array(matrices, dtype=float)
    arr = np.array(matrices, dtype=object)
    flat = list(arr.flat)
    if any(isinstance(x, (float, np.floating)) for x in flat):
        return np.array([float(x) for x in flat], dtype=float).reshape(arr.shape)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = _to_scalar(x)
    return out


def _eye(n: int, like: np.ndarray) -> np.ndarray:
    if like.dtype != object:
        return np.eye(n)
    out = np.empty((n, n), dtype=object)
    out.fill(Scalar(0))
    for i in range(n):
        out[i, i] = Scalar(1)
    return out


def _sum(arr, axis=None):
    return np.sum(arr, axis=axis)


def mean_vector(h: SecondFundamentalForm) -> np.ndarray:
    """``H^alpha = tr(A_alpha) / n`` for each normal direction."""
    return np.trace(h.matrices, axis1=1, axis2=2) / h.n


def traceless(h: SecondFundamentalForm) -> SecondFundamentalForm:
    """Remove the umbilical part: ``h~^alpha_ij = h^alpha_ij - H^alpha delta_ij``."""
    hv = mean_vector(h)
    eye = _eye(h.n, h.matrices)
    return SecondFundamentalForm(h.matrices - hv[:, None, None] * eye[None, :, :])


def sigma(h: SecondFundamentalForm) -> np.ndarray:
    """Gram matrix ``sigma_ab = tr(A_a A_b)``."""
    m = h.matrices
    return np.einsum("aij,bij->ab", m, m)


@dataclass(frozen=True)
class FormInvariants:
    mean_vector: np.ndarray
    mean_norm_sq: object
    sigma: np.ndarray
    sigma_tilde: np.ndarray
    S: object
    rho_sq: object


def invariants(h: SecondFundamentalForm) -> FormInvariants:
    hv = mean_vector(h)
    sig = sigma(h)
    sig_t = sigma(traceless(h))
    S = np.trace(sig)
    h_sq = _sum(hv * hv)
    return FormInvariants(hv, h_sq, sig, sig_t, S, S - h.n * h_sq)


def gauss_tensor(h: SecondFundamentalForm) -> np.ndarray:
    """Riemann tensor ``R_ijkl`` of the submanifold from the Gauss equation."""
    m = h.matrices
    eye = _eye(h.n, m)
    unit = np.einsum("ik,jl->ijkl", eye, eye) - np.einsum("il,jk->ijkl", eye, eye)
    return unit + np.einsum("aik,ajl->ijkl", m, m) - np.einsum("ail,ajk->ijkl", m, m)


def ricci_tensor(h: SecondFundamentalForm) -> np.ndarray:
    """``R_ij = (n-1) delta_ij + n sum_a H^a h^a_ij - sum_a (A_a^2)_ij``."""
    m = h.matrices
    n = h.n
    hv = mean_vector(h)
    return (n - 1) * _eye(n, m) + n * np.einsum("a,aij->ij", hv, m) - np.einsum(
        "aik,akj->ij", m, m
    )


def normal_curvature(h: SecondFundamentalForm) -> np.ndarray:
    """Normal curvature ``R^perp_{ab ij} = [A_a, A_b]_ij`` as a (p, p, n, n) array."""
    m = h.matrices
    ab = np.einsum("aik,bkj->abij", m, m)
    return ab - np.swapaxes(ab, 0, 1)


def commutator_norms(matrices: np.ndarray) -> np.ndarray:
    """``N([B_r, B_s])`` for all pairs, ``N`` being the squared Frobenius norm."""
    ab = np.einsum("rik,skj->rsij", matrices, matrices)
    comm = ab - np.swapaxes(ab, 0, 1)
    return np.einsum("rsij,rsij->rs", comm, comm)


def reduced_el_residual(h: SecondFundamentalForm, k) -> np.ndarray:
    """Algebraic part of the k-extremal Euler-Lagrange system, one entry per normal.

    ``sum_b tr(A_a A_b^2) - sum_b H^b sigma_ab - (n / 2k) rho^2 H^a``.  For
    forms with parallel second fundamental form (every catalog model) the
    derivative terms vanish and the model is k-extremal iff this is zero.
    The caller is responsible for that parallelism; it is not checked here.
    """
    k = check_k(k)
    inv = invariants(h)
    m = h.matrices
    cubic = np.einsum("aij,bjk,bki->a", m, m, m)
    coeff = Scalar(h.n) / (2 * Scalar(k)) if m.dtype == object else h.n / (2 * float(k))
    return cubic - inv.sigma @ inv.mean_vector - coeff * inv.rho_sq * inv.mean_vector


def sectional_curvature(h: SecondFundamentalForm, u, v) -> float:
    """Sectional curvature of the plane spanned by orthonormal ``u, v`` (floats)."""
    m = np.asarray(h.astype_float().matrices)
    uau = np.einsum("i,aij,j->a", u, m, u)
    vav = np.einsum("i,aij,j->a", v, m, v)
    uav = np.einsum("i,aij,j->a", u, m, v)
    return 1.0 + float(np.sum(uau * vav - uav * uav))


@dataclass(frozen=True)
class CurvatureSummary:
    """Curvature data of a form at one point.

    ``k_min`` and ``ricci_min`` are exact Scalars whenever they can be
    certified (diagonal forms, ``n == 2``); otherwise they are flagged float
    Scalars and, for ``k_min``, an upper bound from sampled planes.
    """

    n: int
    p: int
    mean_vector: tuple[Scalar, ...]
    mean_norm_sq: Scalar
    S: Scalar
    rho_sq: Scalar
    scalar_curv: Scalar
    ricci_min: Scalar
    k_min: Scalar
    k_min_sampled: bool = False
    planes_sampled: int = 0
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "mean_vector": list(self.mean_vector),
            "mean_norm_sq": self.mean_norm_sq,
            "S": self.S,
            "rho_sq": self.rho_sq,
            "scalar_curv": self.scalar_curv,
            "ricci_min": self.ricci_min,
            "k_min": self.k_min,
            "k_min_sampled": self.k_min_sampled,
            "planes_sampled": self.planes_sampled,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> CurvatureSummary:
        from .jsonio import scalar_from_json

        return cls(
            n=data["n"],
            p=data["p"],
            mean_vector=tuple(scalar_from_json(x) for x in data["mean_vector"]),
            mean_norm_sq=scalar_from_json(data["mean_norm_sq"]),
            S=scalar_from_json(data["S"]),
            rho_sq=scalar_from_json(data["rho_sq"]),
            scalar_curv=scalar_from_json(data["scalar_curv"]),
            ricci_min=scalar_from_json(data["ricci_min"]),
            k_min=scalar_from_json(data["k_min"]),
            k_min_sampled=data["k_min_sampled"],
            planes_sampled=data["planes_sampled"],
            notes=tuple(data["notes"]),
        )


def _exact_min(values):
    best = values[0]
    for v in values[1:]:
        if v < best:
            best = v
    return best


def _min_sectional(h: SecondFundamentalForm, planes: int, seed: int):
    n = h.n
    R = gauss_tensor(h)
    coord = [R[i, j, i, j] for i, j in combinations(range(n), 2)]
    exact = h.matrices.dtype == object
    if n == 2 or h.is_diagonal():
        # coordinate planes are principal planes, and sectional curvature on a
        # principal frame is minimized at a coordinate pair
        if exact:
            return _exact_min(coord), False, 0
        return Scalar.from_float(min(coord)), False, 0
    best = min(float(x) for x in coord)
    if planes > 0:
        rng = np.random.default_rng(seed)
        fm = h.astype_float().matrices
        basis = rng.standard_normal((planes, n, 2))
        q, _ = np.linalg.qr(basis)
        u, v = q[:, :, 0], q[:, :, 1]
        uau = np.einsum("si,aij,sj->sa", u, fm, u)
        vav = np.einsum("si,aij,sj->sa", v, fm, v)
        uav = np.einsum("si,aij,sj->sa", u, fm, v)
        ks = 1.0 + np.sum(uau * vav - uav * uav, axis=1)
        best = min(best, float(ks.min()))
    return Scalar.from_float(best), True, planes


def _ricci_min(ric: np.ndarray):
    n = ric.shape[0]
    off = ~np.eye(n, dtype=bool)
    if ric.dtype == object:
        if all(x == 0 for x in ric[off].flat):
            return _exact_min([ric[i, i] for i in range(n)])
        if n <= 4:
            return Scalar.from_float(_sturm_min_eigenvalue(ric))
        ric = np.vectorize(float, otypes=[float])(ric)
    return Scalar.from_float(float(np.linalg.eigvalsh(ric)[0]))


def _charpoly(mat: np.ndarray) -> list:
    """Characteristic polynomial coefficients, highest degree first (Faddeev-LeVerrier)."""
    n = mat.shape[0]
    eye = _eye(n, mat)
    coeffs = [Scalar(1)]
    M = np.zeros_like(mat)
    M.fill(Scalar(0))
    for k in range(1, n + 1):
        M = mat @ M + coeffs[-1] * eye
        coeffs.append(-np.trace(mat @ M) / k)
    return coeffs


def _poly_eval(c, x):
    acc = Scalar(0)
    for a in c:
        acc = acc * x + a
    return acc


def _poly_rem(a, b):
    a = list(a)
    while len(a) >= len(b):
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] = a[i] - f * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _sturm_chain(c):
    deg = len(c) - 1
    chain = [c, [c[i] * (deg - i) for i in range(deg)]]
    while True:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            return chain
        chain.append([-x for x in r])


def _sign_changes(chain, x) -> int:
    signs = [s for s in (_poly_eval(p, x).sign() for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sturm_min_eigenvalue(mat: np.ndarray) -> float:
    """Smallest eigenvalue of an exact symmetric matrix by Sturm bisection."""
    from gmpy2 import mpq

    n = mat.shape[0]
    chain = _sturm_chain(_charpoly(mat))
    # Gershgorin disc bound
    radius = max(sum(abs(float(mat[i, j])) for j in range(n)) for i in range(n)) + 1
    lo, hi = mpq(-int(radius) - 1), mpq(int(radius) + 1)
    total = _sign_changes(chain, lo)
    while float(hi - lo) > EIGEN_TOL / 4:
        mid = (lo + hi) / 2
        if _sign_changes(chain, mid) < total:
            hi = mid
        else:
            lo = mid
    return float((lo + hi) / 2)


def gauss_curvatures(
    h: SecondFundamentalForm, *, planes: int = DEFAULT_PLANES, seed: int = 0
) -> CurvatureSummary:
    """Curvature summary from the Gauss and Ricci equations.

    ``planes`` random orthonormal 2-planes are sampled for ``k_min`` only when
    the form is neither diagonal nor two-dimensional.
    """
    inv = invariants(h)
    n = h.n
    scal = n * (n - 1) + n * n * inv.mean_norm_sq - inv.S
    k_min, sampled, used = _min_sectional(h, planes, seed)
    notes = ()
    if sampled:
        notes = (f"k_min is an upper bound from coordinate pairs and {used} random planes",)
    return CurvatureSummary(
        n=n,
        p=h.p,
        mean_vector=tuple(_to_scalar(x) for x in inv.mean_vector),
        mean_norm_sq=_to_scalar(inv.mean_norm_sq),
        S=_to_scalar(inv.S),
        rho_sq=_to_scalar(inv.rho_sq),
        scalar_curv=_to_scalar(scal),
        ricci_min=_ricci_min(ricci_tensor(h)),
        k_min=k_min,
        k_min_sampled=sampled,
        planes_sampled=used,
        notes=notes,
    )
