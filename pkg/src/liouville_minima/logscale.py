"""Validated logarithms, outward-rounded interval arithmetic, and exact scales.

Every exponent this package reports is a ratio of logarithms of exact
rationals.  Plain floating point cannot certify the 1e-12 accuracy contract,
so logarithms are evaluated with MPFR directed rounding (via gmpy2) and all
subsequent arithmetic runs on small outward-rounded float intervals.  The
only transcendental step is the log itself; everything feeding it is exact.

`QScale` is the exact representation of a scale parameter Q > 1, either a
rational or a rational power ``base**(num/den)`` so that grids such as
``Q = 10**(8/3)`` keep exact logarithms and exact integer box bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import gmpy2

from .errors import ValidationError

__all__ = [
    "INF",
    "NEG_INF",
    "Interval",
    "log_interval",
    "log_of_rational",
    "QScale",
]

INF = float("inf")
NEG_INF = float("-inf")

_LOG_START_PRECISION = 96
_LOG_MAX_PRECISION = 5000
_DEFAULT_LOG_WIDTH = 1e-13


def _next_down(v: float) -> float:
    return math.nextafter(v, NEG_INF)


def _next_up(v: float) -> float:
    return math.nextafter(v, INF)


@dataclass(frozen=True)
class Interval:
    """Closed float interval [lo, hi] guaranteed to contain the true value.

    Operations pad results outward by one ulp, so chains of arithmetic stay
    sound at the cost of a few 1e-16-scale widenings, far below the 1e-12
    budget of the callers.
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @staticmethod
    def exact(v: float) -> "Interval":
        return Interval(v, v)

    @staticmethod
    def from_rational(q: Rational) -> "Interval":
        f = float(Fraction(q))
        if Fraction(f) == Fraction(q):
            return Interval(f, f)
        return Interval(_next_down(f), _next_up(f))

    def width(self) -> float:
        return self.hi - self.lo

    def mid(self) -> float:
        if self.lo == self.hi:
            return self.lo
        return self.lo + (self.hi - self.lo) / 2.0

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(_next_down(self.lo + other.lo), _next_up(self.hi + other.hi))

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(_next_down(self.lo - other.hi), _next_up(self.hi - other.lo))

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        prods = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(_next_down(min(prods)), _next_up(max(prods)))

    def scale(self, c: Rational) -> "Interval":
        return self * Interval.from_rational(c)

    def shift(self, c: Rational) -> "Interval":
        return self + Interval.from_rational(c)

    def div_pos(self, other: "Interval") -> "Interval":
        # denominator must be strictly positive for a finite quotient
        if other.lo <= 0.0:
            raise ZeroDivisionError("interval division requires a positive denominator")
        quots = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return Interval(_next_down(min(quots)), _next_up(max(quots)))

    def max_with(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), max(self.hi, other.hi))

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi


def _float_directed(x, rounding) -> float:
    # re-round an mpfr to 53 bits with the requested direction; float() of a
    # 53-bit mpfr is then exact
    with gmpy2.context(precision=53, round=rounding):
        return float(gmpy2.mpfr(x))


def _log_directed(value, precision: int, rounding) -> float:
    # conversion to mpfr and log are both monotone non-decreasing, so
    # rounding both in the same direction yields a true one-sided bound
    with gmpy2.context(precision=precision, round=rounding):
        y = gmpy2.log(gmpy2.mpfr(value))
    return _float_directed(y, rounding)


def log_interval(value, width: float = _DEFAULT_LOG_WIDTH) -> Interval:
    """Validated natural log of a positive int/Fraction as an Interval.

    The interval is refined by doubling MPFR precision until it is narrower
    than ``width`` (absolute).
    """
    if isinstance(value, float):
        raise TypeError("log_interval takes exact int/Fraction input, not float")
    frac = Fraction(value)
    if frac <= 0:
        raise ValidationError("log_interval requires a positive value")
    if frac == 1:
        return Interval(0.0, 0.0)
    arg = gmpy2.mpq(frac.numerator, frac.denominator)
    precision = _LOG_START_PRECISION
    while True:
        lo = _log_directed(arg, precision, gmpy2.RoundDown)
        hi = _log_directed(arg, precision, gmpy2.RoundUp)
        if hi - lo < width:
            return Interval(lo, hi)
        if precision > _LOG_MAX_PRECISION:
            raise ArithmeticError(
                f"log interval failed to reach width {width} at precision {precision}"
            )
        precision *= 2


def log_of_rational(value, width: float = _DEFAULT_LOG_WIDTH) -> float:
    """Natural log of a positive int/Fraction, correct to ``width``."""
    return log_interval(value, width).mid()


_LN10 = log_interval(10)


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        # floats are exact binary rationals; accept them verbatim
        if not math.isfinite(value):
            raise ValueError("scale values must be finite")
        return Fraction(value)
    return Fraction(value)


@dataclass(frozen=True)
class QScale:
    """Exact scale parameter Q = base**(num/den) with Q > 1.

    ``base`` is a rational > 1 and ``num/den`` a positive exponent in lowest
    terms.  Plain rationals use den = num = 1 ... i.e. exponent 1.  The class
    provides exact comparisons and exact integer box bounds; logarithms come
    out as validated intervals.
    """

    base: Fraction
    num: int = 1
    den: int = 1

    def __post_init__(self) -> None:
        base = Fraction(self.base)
        num, den = self.num, self.den
        if not isinstance(num, int) or not isinstance(den, int):
            raise ValidationError(
                f"exponent must be an integer ratio, got {num!r}/{den!r}"
            )
        if den == 0:
            raise ValidationError("exponent denominator must be nonzero")
        if den < 0:
            num, den = -num, -den
        if num < 0:
            if base <= 0:
                raise ValidationError("base must be positive")
            base = 1 / base
            num = -num
        g = math.gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        if base <= 1 or num == 0:
            raise ValidationError(f"scale must exceed 1, got {base}**({num}/{den})")

    @staticmethod
    def coerce(value) -> "QScale":
        if isinstance(value, QScale):
            return value
        return QScale(_as_fraction(value))

    @staticmethod
    def power(base, num: int, den: int = 1) -> "QScale":
        return QScale(_as_fraction(base), num, den)

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.num, self.den)

    def is_rational(self) -> bool:
        return self.den == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not an exact rational")
        return self.base ** self.num

    def log_interval(self, width: float = _DEFAULT_LOG_WIDTH) -> Interval:
        return log_interval(self.base, width).scale(self.exponent)

    def log(self) -> float:
        return self.log_interval().mid()

    def log10(self) -> float:
        return self.log_interval().div_pos(_LN10).mid()

    def log10_interval(self) -> Interval:
        return self.log_interval().div_pos(_LN10)

    def compare(self, other: "QScale") -> int:
        """Exact three-way comparison (-1, 0, 1) with another scale."""
        # quick validated-interval screen first
        a = self.log_interval()
        b = other.log_interval()
        if a.hi < b.lo:
            return -1
        if a.lo > b.hi:
            return 1
        e1 = self.num * other.den
        e2 = other.num * self.den
        lhs = self.base.numerator**e1 * other.base.denominator**e2
        rhs = other.base.numerator**e2 * self.base.denominator**e1
        if lhs < rhs:
            return -1
        if lhs > rhs:
            return 1
        return 0

    def __lt__(self, other: "QScale") -> bool:
        return self.compare(other) < 0

    def __le__(self, other: "QScale") -> bool:
        return self.compare(other) <= 0

    def equals(self, other: "QScale") -> bool:
        return self.compare(other) == 0

    def pow_floor(self, exp_num: int, exp_den: int) -> int:
        """Largest integer x >= 1 with x <= Q**(exp_num/exp_den), exact.

        Requires a positive exponent.  Used for enumeration box bounds.
        """
        if exp_num <= 0 or exp_den <= 0:
            raise ValidationError("pow_floor requires a positive exponent")
        # x <= (p/q)**(num*exp_num/(den*exp_den))
        # <=> x**(den*exp_den) * q**(num*exp_num) <= p**(num*exp_num)
        en = self.num * exp_num
        ed = self.den * exp_den
        p = self.base.numerator
        q = self.base.denominator
        rhs = p**en
        qpow = q**en
        # floor((rhs/qpow)**(1/ed)) equals the integer root of the floored
        # quotient: for integer c, c**ed <= rhs/qpow iff c**ed <= rhs//qpow
        root = int(gmpy2.iroot(gmpy2.mpz(rhs // qpow), ed)[0])
        # belt-and-braces adjustment; by the identity above it never fires
        while root >= 1 and root**ed * qpow > rhs:
            root -= 1
        while (root + 1) ** ed * qpow <= rhs:
            root += 1
        return max(root, 1)

    def __repr__(self) -> str:
        if self.is_rational() and self.num == 1:
            return f"QScale({self.base})"
        return f"QScale({self.base}**({self.num}/{self.den}))"

    def label(self) -> str:
        """Compact deterministic text form, used in reports and CSV dumps."""
        if self.is_rational():
            value = self.as_fraction()
            if value.denominator == 1:
                return str(value.numerator)
            return f"{value.numerator}/{value.denominator}"
        base = self.base
        base_txt = (
            str(base.numerator)
            if base.denominator == 1
            else f"({base.numerator}/{base.denominator})"
        )
        return f"{base_txt}^({self.num}/{self.den})"
