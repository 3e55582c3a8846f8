"""Exact arithmetic in a single quadratic extension Q(sqrt d).

A :class:`Scalar` is either exact, ``q + r*sqrt(d)`` with rational ``q, r`` and
square-free ``d >= 2``, or an explicitly flagged high-precision float.  Exact
values only become floats when an operation mixes two different radicands in
a way that leaves Q(sqrt d), and the result then says so (``is_exact`` is
False and the string form starts with ``float:``).
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import gmpy2
import mpmath
from gmpy2 import mpq

__all__ = [
    "FLOAT_PREC",
    "Scalar",
    "as_rational",
    "sgn",
    "sqrt_exact",
    "squarefree_split",
]

FLOAT_PREC = 128
TRIAL_DIVISION_LIMIT = 10**6

_fp = mpmath.MPContext()
_fp.prec = FLOAT_PREC

_ZERO = mpq(0)
_ONE = mpq(1)


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` square-free.

    Trial division runs up to 10**6.  A cofactor left over after that is
    accepted when it is a perfect square or below 10**18 (then it has at most
    two prime factors, both above the limit, so it is square-free unless it
    is a square); anything larger raises ``ValueError``.
    """
    n = int(n)
    if n <= 0:
        raise ValueError(f"squarefree_split needs a positive integer, got {n}")
    s, d = 1, 1
    m = n
    p = 2
    while p * p <= m and p <= TRIAL_DIVISION_LIMIT:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    if m > 1:
        if gmpy2.is_square(m):
            s *= int(gmpy2.isqrt(m))
        elif p > TRIAL_DIVISION_LIMIT and m >= TRIAL_DIVISION_LIMIT**3:
            raise ValueError(
                f"radicand {n} has a cofactor {m} beyond the trial-division limit"
            )
        else:
            d *= m
    return s, d


def as_rational(x) -> mpq:
    """Coerce ints, Fractions, rational Scalars and ``p/q`` strings to mpq."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return mpq(x)
    if type(x) is type(_ONE):
        return x
    if isinstance(x, Rational):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, Scalar):
        if not x.is_rational:
            raise ValueError(f"{x} is not rational")
        return x._q
    if isinstance(x, str):
        try:
            f = Fraction(x.strip())
        except ValueError:
            raise ValueError(f"cannot parse rational {x!r}") from None
        return mpq(f.numerator, f.denominator)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _exact_sign(q, r, d) -> int:
    if r == 0:
        return _sign(q)
    sr, sq = _sign(r), _sign(q)
    if sq == 0 or sq == sr:
        return sr
    # opposite signs; d is not a square so q*q != r*r*d
    return sq if q * q > r * r * d else sr


def _mpf_of_rational(q):
    return _fp.mpf(int(q.numerator)) / int(q.denominator)


class Scalar:
    """A number ``q + r*sqrt(d)`` or a flagged float.

    Instances are immutable.  Arithmetic with ints, Fractions and mpq stays
    exact; arithmetic with Python floats yields flagged floats.
    """

    __slots__ = ("_q", "_r", "_d", "_f")

    def __init__(self, q=0, r=0, d=1):
        q = as_rational(q)
        r = as_rational(r)
        d = int(d)
        if d < 0:
            raise ValueError("radicand must be non-negative")
        if r == 0 or d == 0:
            r, d = _ZERO, 1
        else:
            s, d = squarefree_split(d)
            r = r * s
            if d == 1:
                q, r = q + r, _ZERO
        self._q, self._r, self._d, self._f = q, r, d, None

    @classmethod
    def _exact(cls, q, r, d) -> Scalar:
        # d is already square-free (or 1 when r == 0)
        self = object.__new__(cls)
        if r == 0:
            self._q, self._r, self._d = q, _ZERO, 1
        else:
            self._q, self._r, self._d = q, r, d
        self._f = None
        return self

    @classmethod
    def from_float(cls, x) -> Scalar:
        """Explicit conversion to a flagged float."""
        self = object.__new__(cls)
        self._q = self._r = self._d = None
        if isinstance(x, Scalar):
            x = x.to_mpf()
        elif isinstance(x, str):
            x = _fp.mpf(x)
        else:
            x = _fp.mpf(float(x)) if not isinstance(x, _fp.mpf) else x
        self._f = x
        return self

    @classmethod
    def coerce(cls, x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, float):
            return cls.from_float(x)
        if hasattr(x, "dtype") and getattr(x.dtype, "kind", "") == "f":
            return cls.from_float(float(x))
        if isinstance(x, str):
            return cls.parse(x)
        return cls._exact(as_rational(x), _ZERO, 1)

    # -- inspection -------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self._f is None

    @property
    def is_float(self) -> bool:
        """True when the value is a flagged float fallback."""
        return self._f is not None

    @property
    def is_rational(self) -> bool:
        return self._f is None and self._r == 0

    @property
    def rational_part(self) -> Fraction:
        self._require_exact()
        return Fraction(int(self._q.numerator), int(self._q.denominator))

    @property
    def surd_coeff(self) -> Fraction:
        self._require_exact()
        return Fraction(int(self._r.numerator), int(self._r.denominator))

    @property
    def radicand(self) -> int | None:
        self._require_exact()
        return None if self._r == 0 else self._d

    def _require_exact(self):
        if self._f is not None:
            raise ValueError("float Scalar has no exact components")

    def to_mpf(self):
        if self._f is not None:
            return self._f
        v = _mpf_of_rational(self._q)
        if self._r != 0:
            v += _mpf_of_rational(self._r) * _fp.sqrt(self._d)
        return v

    def __float__(self) -> float:
        if self._f is None and self._r == 0:
            return float(self._q)
        return float(self.to_mpf())

    def sign(self) -> int:
        if self._f is not None:
            return _sign(self._f)
        return _exact_sign(self._q, self._r, self._d)

    def conjugate(self) -> Scalar:
        self._require_exact()
        return Scalar._exact(self._q, -self._r, self._d)

    def norm(self) -> mpq:
        """Field norm ``q**2 - r**2 d`` of an exact value."""
        self._require_exact()
        return self._q * self._q - self._r * self._r * self._d

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        if self._f is None and o._f is None:
            if o._r == 0:
                return Scalar._exact(self._q + o._q, self._r, self._d)
            if self._r == 0:
                return Scalar._exact(self._q + o._q, o._r, o._d)
            if self._d == o._d:
                return Scalar._exact(self._q + o._q, self._r + o._r, self._d)
        return Scalar.from_float(self.to_mpf() + o.to_mpf())

    __radd__ = __add__

    def __neg__(self):
        if self._f is not None:
            return Scalar.from_float(-self._f)
        return Scalar._exact(-self._q, -self._r, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        if self._f is None and o._f is None:
            if o._r == 0:
                return Scalar._exact(self._q * o._q, self._r * o._q, self._d)
            if self._r == 0:
                return Scalar._exact(self._q * o._q, self._q * o._r, o._d)
            if self._d == o._d:
                return Scalar._exact(
                    self._q * o._q + self._r * o._r * self._d,
                    self._q * o._r + self._r * o._q,
                    self._d,
                )
            if self._q == 0 and o._q == 0:
                # r1 sqrt(d1) * r2 sqrt(d2) = r1 r2 g sqrt(d1 d2 / g^2)
                g = gmpy2.gcd(self._d, o._d)
                e = (self._d // g) * (o._d // g)
                return Scalar._exact(_ZERO, self._r * o._r * g, int(e))
        return Scalar.from_float(self.to_mpf() * o.to_mpf())

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        if o.sign() == 0:
            raise ZeroDivisionError("division by an exact or float zero Scalar")
        if self._f is None and o._f is None:
            if o._r == 0:
                return Scalar._exact(self._q / o._q, self._r / o._q, self._d)
            n = o.norm()
            prod = self * o.conjugate()
            if prod._f is None:
                return Scalar._exact(prod._q / n, prod._r / n, prod._d)
        return Scalar.from_float(self.to_mpf() / o.to_mpf())

    def __rtruediv__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return Scalar._exact(_ONE, _ZERO, 1) / (self ** (-e))
        result = Scalar._exact(_ONE, _ZERO, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def sqrt(self) -> Scalar:
        """Square root; exact when it lies in the same quadratic field."""
        if self._f is not None:
            if self._f < 0:
                raise ValueError("square root of a negative Scalar")
            return Scalar.from_float(_fp.sqrt(self._f))
        if self._r == 0:
            return sqrt_exact(self._q)
        if self.sign() < 0:
            raise ValueError(f"square root of negative {self}")
        # (u + v sqrt d)^2 = a + b sqrt d  <=>  u^2 + d v^2 = a, 2uv = b
        a, b, d = self._q, self._r, self._d
        disc = a * a - b * b * d
        if disc >= 0:
            root = _rational_sqrt(disc)
            if root is not None:
                for u_sq in ((a + root) / 2, (a - root) / 2):
                    u = _rational_sqrt(u_sq) if u_sq > 0 else None
                    if u is not None:
                        v = b / (2 * u)
                        cand = Scalar._exact(u, v, d)
                        if cand.sign() >= 0:
                            return cand
                        return -cand
        return Scalar.from_float(_fp.sqrt(self.to_mpf()))

    # -- comparison -------------------------------------------------------

    def _cmp(self, other) -> int:
        o = _coerce_operand(other)
        if o is None:
            raise TypeError(f"cannot compare Scalar with {type(other).__name__}")
        if self._f is None and o._f is None:
            if o._r == 0 or self._r == 0 or self._d == o._d:
                return (self - o).sign()
            return _cross_radicand_sign(self, o)
        a, b = self.to_mpf(), o.to_mpf()
        return (a > b) - (a < b)

    def __eq__(self, other):
        o = _coerce_operand(other)
        if o is None:
            return NotImplemented
        if self._f is None and o._f is None:
            return self._q == o._q and self._r == o._r and (self._r == 0 or self._d == o._d)
        return self.to_mpf() == o.to_mpf()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        if self._f is not None:
            return hash(float(self._f))
        if self._r == 0:
            return hash(self._q)
        return hash((self._q, self._r, self._d))

    def __bool__(self):
        return self.sign() != 0

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        if self._f is not None:
            return "float:" + _fp.nstr(self._f, 40, strip_zeros=False)
        if self._r == 0:
            return str(self._q)
        mag = abs(self._r)
        surd = f"sqrt({self._d})" if mag == 1 else f"{mag}*sqrt({self._d})"
        if self._q == 0:
            return surd if self._r > 0 else "-" + surd
        return f"{self._q}{'+' if self._r > 0 else '-'}{surd}"

    def __repr__(self) -> str:
        return f"Scalar('{self}')"

    @classmethod
    def parse(cls, text: str) -> Scalar:
        """Parse ``q``, ``r*sqrt(d)``, ``q+r*sqrt(d)`` or ``float:<decimal>``.

        Rationals may be written ``p/q`` or as decimals; ``sqrt`` accepts a
        rational argument and non-square-free radicands are reduced.
        """
        s = text.strip().replace(" ", "")
        if s.startswith("float:"):
            try:
                return cls.from_float(_fp.mpf(s[6:]))
            except (ValueError, TypeError):
                raise ValueError(f"cannot parse scalar {text!r}") from None
        if not s or _TERMS_RE.fullmatch(s) is None:
            raise ValueError(f"cannot parse scalar {text!r}")
        total = cls._exact(_ZERO, _ZERO, 1)
        for m in _TERM_RE.finditer(s):
            sign = -1 if m.group("sign") == "-" else 1
            if m.group("rad") is not None:
                coeff = as_rational(m.group("coef")) if m.group("coef") else _ONE
                term = sqrt_exact(as_rational(m.group("rad"))) * coeff
            else:
                term = cls._exact(as_rational(m.group("rat")), _ZERO, 1)
            total = total + (term if sign > 0 else -term)
        return total


_NUM = r"(?:\d+/\d+|\d+(?:\.\d*)?|\.\d+)"
_TERM = (
    rf"(?P<sign>[+-]?)(?:(?:(?P<coef>{_NUM})\*)?sqrt\((?P<rad>{_NUM})\)|(?P<rat>{_NUM}))"
)
_TERM_RE = re.compile(_TERM)
_TERMS_RE = re.compile(
    rf"[+-]?(?:(?:{_NUM}\*)?sqrt\({_NUM}\)|{_NUM})(?:[+-](?:(?:{_NUM}\*)?sqrt\({_NUM}\)|{_NUM}))*"
)


def _coerce_operand(x) -> Scalar | None:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, bool):
        return None
    if isinstance(x, int):
        return Scalar._exact(mpq(x), _ZERO, 1)
    if isinstance(x, float):
        return Scalar.from_float(x)
    if type(x) is type(_ONE) or isinstance(x, Rational):
        return Scalar._exact(as_rational(x), _ZERO, 1)
    return None


def _rational_sqrt(q):
    """Exact rational square root of a non-negative mpq, or None."""
    num, den = int(q.numerator), int(q.denominator)
    if num < 0:
        return None
    if gmpy2.is_square(num) and gmpy2.is_square(den):
        return mpq(int(gmpy2.isqrt(num)), int(gmpy2.isqrt(den)))
    return None


def _cross_radicand_sign(a: Scalar, b: Scalar) -> int:
    # sign(x - y) with x = (qa - qb) + ra sqrt(da) in Q(sqrt da), y = rb sqrt(db)
    x = Scalar._exact(a._q - b._q, a._r, a._d)
    sx, sy = x.sign(), _sign(b._r)
    if sx >= 0 >= sy:
        return 0 if sx == sy == 0 else 1
    if sx <= 0 <= sy:
        return -1
    # same strict sign: compare squares, x^2 in Q(sqrt da), y^2 rational
    diff = (x * x - b._r * b._r * b._d).sign()
    return diff if sx > 0 else -diff


def sqrt_exact(q) -> Scalar:
    """Square root of a non-negative rational as ``r*sqrt(d)``."""
    q = as_rational(q)
    if q < 0:
        raise ValueError(f"sqrt_exact of negative rational {q}")
    if q == 0:
        return Scalar._exact(_ZERO, _ZERO, 1)
    num, den = int(q.numerator), int(q.denominator)
    s, d = squarefree_split(num * den)
    coeff = mpq(s, den)
    if d == 1:
        return Scalar._exact(coeff, _ZERO, 1)
    return Scalar._exact(_ZERO, coeff, d)


def sgn(x) -> int:
    """Sign in {-1, 0, 1}; ``sgn(0) == 0``."""
    if isinstance(x, Scalar):
        return x.sign()
    if isinstance(x, float):
        return _sign(x)
    return _sign(as_rational(x))
