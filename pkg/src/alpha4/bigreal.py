"""Midpoint-radius arithmetic on top of mpmath.

BigRealWithError is a value together with a rigorous absolute error
radius. It is deliberately not a general interval library: it supports
exactly the operations the series and density code needs (add, subtract,
multiply, division by exact rationals, widening by a known tail bound,
distance to the nearest integer) and propagates radii conservatively.

Radius bookkeeping: every arithmetic op adds the incoming radii (with
cross terms for products), charges one relative ulp for rounding the new
midpoint, and finally inflates the radius by (1 + 2^-16) so that the
floating-point evaluation of the radius expression itself can never
round the bound downward. mpmath's mpf has an unbounded exponent, so a
nonzero bound never flushes to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath as mp

__all__ = ["BigRealWithError"]


def _ulp_bound(x: mp.mpf) -> mp.mpf:
    # |round(x) - x| <= |x| * 2^(1-prec) at the working precision; this is
    # twice the true half-ulp bound, which keeps the charge safe when the
    # midpoint was produced by one rounded operation.
    if x == 0:
        return mp.mpf(0)
    return abs(x) * mp.ldexp(mp.mpf(1), 1 - mp.mp.prec)


def _pad(r: mp.mpf) -> mp.mpf:
    # inflate so the radius arithmetic's own rounding cannot shave the bound
    return r * (mp.mpf(1) + mp.ldexp(mp.mpf(1), -16))


def _coerce(x) -> "BigRealWithError":
    if isinstance(x, BigRealWithError):
        return x
    return BigRealWithError.exact(x)


@dataclass(frozen=True)
class BigRealWithError:
    """An mpf midpoint and an mpf radius bounding |true - value|."""

    value: mp.mpf
    err: mp.mpf

    def __post_init__(self):
        if self.err < 0:
            raise ValueError("error radius must be nonnegative")

    # -- constructors -------------------------------------------------

    @classmethod
    def exact(cls, x) -> "BigRealWithError":
        """Wrap a value, charging conversion rounding where it can occur.

        ints and Fractions wider than the working precision get a
        conversion-ulp charge; mpf and float inputs are taken at face
        value (their binary value is the value being wrapped).
        """
        if isinstance(x, BigRealWithError):
            return x
        if isinstance(x, int):
            m = mp.mpf(x)
            e = mp.mpf(0) if int(m) == x else _pad(_ulp_bound(m))
            return cls(m, e)
        if isinstance(x, Rational):
            num, den = x.numerator, x.denominator
            m = mp.mpf(num) / den
            # two rounded steps: <= 2 * 2^(1-prec) relative, covered below
            return cls(m, _pad(2 * _ulp_bound(m)))
        return cls(mp.mpf(x), mp.mpf(0))

    # -- accessors ----------------------------------------------------

    def lower(self) -> mp.mpf:
        # computed at a precision covering both mantissas end to end, so
        # the subtraction is exact regardless of the ambient precision
        with mp.workprec(_span_prec(self.value, self.err)):
            return self.value - self.err

    def upper(self) -> mp.mpf:
        with mp.workprec(_span_prec(self.value, self.err)):
            return self.value + self.err

    def widen(self, extra) -> "BigRealWithError":
        """Add a known extra error bound (e.g. a series tail) to the radius."""
        if isinstance(extra, Rational):
            e = mp.mpf(extra.numerator) / extra.denominator
            e = _pad(e + 2 * _ulp_bound(e))
        else:
            e = mp.mpf(extra)
        if e < 0:
            raise ValueError("cannot widen by a negative amount")
        return BigRealWithError(self.value, _pad(self.err + e))

    def digits(self, n: int = 20) -> str:
        return mp.nstr(self.value, n)

    def leading_decimal(self, n: int) -> str:
        """The first n significant digits, truncated (never rounded up).

        Certified against the enclosure: raises if [value-err, value+err]
        does not pin down all n digits. Restricted to values >= 1, where
        significant digits and decimal places line up simply.
        """
        if n < 1:
            raise ValueError("need at least one digit")
        lo = _exact_fraction(self.value) - _exact_fraction(self.err)
        hi = _exact_fraction(self.value) + _exact_fraction(self.err)
        if lo < 1:
            raise ValueError("leading_decimal needs a value certified >= 1")
        k = len(str(int(lo)))
        if len(str(int(hi))) != k:
            raise ValueError("enclosure straddles a power of ten")
        scale = Fraction(10) ** (n - k)
        q_lo, q_hi = int(lo * scale), int(hi * scale)
        if q_lo != q_hi:
            raise ValueError(f"error radius leaves digit {n} ambiguous")
        s = str(q_lo)
        return s if n <= k else s[:k] + "." + s[k:]

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "BigRealWithError":
        o = _coerce(other)
        v = self.value + o.value
        return BigRealWithError(v, _pad(self.err + o.err + _ulp_bound(v)))

    __radd__ = __add__

    def __neg__(self) -> "BigRealWithError":
        return BigRealWithError(-self.value, self.err)

    def __sub__(self, other) -> "BigRealWithError":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "BigRealWithError":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "BigRealWithError":
        o = _coerce(other)
        v = self.value * o.value
        r = (
            abs(self.value) * o.err
            + abs(o.value) * self.err
            + self.err * o.err
            + _ulp_bound(v)
        )
        return BigRealWithError(v, _pad(r))

    __rmul__ = __mul__

    def div_exact(self, q) -> "BigRealWithError":
        """Divide by a nonzero int or Fraction."""
        if not isinstance(q, Rational):
            raise TypeError("div_exact takes an exact rational divisor")
        if q == 0:
            raise ZeroDivisionError("division by zero")
        return self * BigRealWithError.exact(Fraction(1, 1) / Fraction(q))

    # -- distance to the nearest integer --------------------------------

    def distance_interval(self):
        """Range of ||theta|| over the enclosure, plus a decidability flag.

        Returns (lo, hi, decided). decided is False when the enclosure
        contains an integer or a half-integer, i.e. when the distance
        map is not monotone across the interval and the endpoints alone
        do not determine the range tightly.
        """
        a, b = self.lower(), self.upper()
        if b - a >= 1:
            return (mp.mpf(0), mp.mpf("0.5"), False)
        da = _dist_to_int(a)
        db = _dist_to_int(b)
        lo, hi = min(da, db), max(da, db)
        contains_int = mp.floor(b) >= mp.ceil(a)
        contains_half = mp.floor(b - mp.mpf("0.5")) >= mp.ceil(a - mp.mpf("0.5"))
        if contains_int:
            lo = mp.mpf(0)
        if contains_half:
            hi = mp.mpf("0.5")
        return (lo, hi, not (contains_int or contains_half))


def _dist_to_int(x: mp.mpf) -> mp.mpf:
    f = x - mp.floor(x)
    return min(f, 1 - f)


def _parts(x):
    # (sign, man, exp, bc) without re-rounding: mp.mpf(x) would round an
    # mpf that is wider than the ambient precision
    if not isinstance(x, mp.mpf):
        x = mp.mpf(x)
    return x._mpf_


def _exact_fraction(x) -> Fraction:
    """The exact rational value of an mpf (mpf values are dyadic)."""
    sign, man, exp, _ = _parts(x)
    if man == 0:
        return Fraction(0)
    f = Fraction(man) * Fraction(2) ** exp
    return -f if sign else f


def _span_prec(a, b) -> int:
    """Bits needed to add/subtract a and b without any rounding."""
    tops, bots = [], []
    for x in (a, b):
        _, man, exp, bc = _parts(x)
        if man:
            tops.append(exp + bc)
            bots.append(exp)
    if not tops:
        return 53
    return max(53, max(tops) - min(bots) + 8)
