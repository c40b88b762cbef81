"""The factorial series of divisor-power sums and its behaviour at primes.

The central object is alpha_k = sum_{n>=1} sigma_k(n)/n!. Partial sums
are exact rationals; certified values come with a tail majorant. For a
prime p, multiplying the tail from n = p by (p-1)! gives an integer plus
a small fractional part, and the four leading terms of that tail admit
an exact expansion whose residuals this module tracks term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .arith import SpfTable, factorize, is_prime, sigma_k
from .bigreal import BigRealWithError
from .errors import PreconditionError

__all__ = [
    "zeta_upper",
    "ZETA4_UPPER",
    "E_UPPER",
    "alpha_partial",
    "tail_bound",
    "terms_needed",
    "alpha_k",
    "TailExpansion",
    "tail_expansion",
    "tail_partial",
    "factorial_tail_exact",
    "prop1_statistic_exact",
    "prop1_statistic",
    "prop1_statistic_with_r_exact",
    "prop1_statistic_with_r",
    "expansion_residuals",
]

MAX_K = 8
MAX_BITS = 1 << 14


def zeta_upper(k: int, cutoff: int = 40) -> Fraction:
    """A rational upper bound for zeta(k), k >= 2.

    Partial sum to `cutoff` plus the integral tail bound
    sum_{n>cutoff} n^-k <= cutoff^(1-k)/(k-1).
    """
    if k < 2:
        raise PreconditionError("zeta_upper needs k >= 2")
    part = sum(Fraction(1, n**k) for n in range(1, cutoff + 1))
    return part + Fraction(1, (k - 1) * cutoff ** (k - 1))


ZETA4_UPPER = zeta_upper(4)
# rational upper bound for e, used in geometric tail majorants
E_UPPER = Fraction(27183, 10000)


def alpha_partial(k: int, n_terms: int, spf: SpfTable | None = None) -> Fraction:
    """Exact partial sum sum_{n=1}^{n_terms} sigma_k(n)/n!."""
    if k < 1 or n_terms < 1:
        raise PreconditionError("alpha_partial needs k >= 1 and n_terms >= 1")
    total = Fraction(0)
    fact = 1
    for n in range(1, n_terms + 1):
        fact *= n
        total += Fraction(sigma_k(n, k, spf), fact)
    return total


def tail_bound(k: int, n0: int) -> Fraction:
    """Rational majorant for sum_{n > n0} sigma_k(n)/n!.

    For k >= 2, sigma_k(n) <= zeta(k) n^k; for k = 1, sigma_1(n) <= n^2.
    With the effective exponent kk, consecutive majorant terms shrink by
    e^(kk/n)/(n+1) <= e/(n0+2) <= 1/2 once n0 >= max(kk, 5), so the tail
    is at most twice its first term.
    """
    if k < 1:
        raise PreconditionError("tail_bound needs k >= 1")
    if k >= 2:
        kk, coef = k, zeta_upper(k)
    else:
        kk, coef = 2, Fraction(1)
    if n0 < max(kk, 5):
        raise PreconditionError(f"tail_bound needs n0 >= {max(kk, 5)} for k={k}")
    return 2 * coef * Fraction((n0 + 1) ** kk, math.factorial(n0 + 1))


def terms_needed(k: int, bits: int) -> int:
    """Smallest n0 (>= max(k,5)) with tail_bound(k, n0) <= 2^-(bits+1)."""
    budget = Fraction(1, 2 ** (bits + 1))
    n0 = max(k, 2, 5)
    while tail_bound(k, n0) > budget:
        n0 += 1
    return n0


def alpha_k(k: int, target_precision: int = 128, spf: SpfTable | None = None) -> BigRealWithError:
    """Certified value of sum_n sigma_k(n)/n! with err <= 2^-target_precision."""
    if not 1 <= k <= MAX_K:
        raise PreconditionError(f"k must be in 1..{MAX_K}, got {k}")
    if not 1 <= target_precision <= MAX_BITS:
        raise PreconditionError(f"target_precision must be in 1..{MAX_BITS}")
    n0 = terms_needed(k, target_precision)
    partial = alpha_partial(k, n0, spf)
    tail = tail_bound(k, n0)
    with mp.workprec(target_precision + 64):
        out = BigRealWithError.exact(partial).widen(tail)
        if out.err > mp.ldexp(mp.mpf(1), -target_precision):
            raise PreconditionError(
                "internal: certified radius exceeds the requested precision"
            )
    return out


# -- the tail at a prime ----------------------------------------------------


def factorial_tail_exact(p: int, n1: int, spf: SpfTable | None = None) -> Fraction:
    """Exact (p-1)! * sum_{n=p}^{n1} sigma_4(n)/n!.

    (p-1)!/n! collapses to 1/(p(p+1)...n), so no large factorials appear.
    """
    if p < 2 or n1 < p:
        raise PreconditionError("factorial_tail_exact needs 2 <= p <= n1")
    total = Fraction(0)
    den = 1
    for n in range(p, n1 + 1):
        den *= n
        total += Fraction(sigma_k(n, 4, spf), den)
    return total


def _falling_products(p: int, count: int) -> list[int]:
    """[p, p(p+1), p(p+1)(p+2), ...] with `count` entries."""
    out = []
    acc = 1
    for i in range(count):
        acc *= p + i
        out.append(acc)
    return out


def _tail_remainder_bound(p: int, j_from: int) -> Fraction:
    """Majorant for (p-1)! sum_{n >= p+j_from} sigma_4(n)/n!, j_from >= 4.

    Each term is at most ZETA4_UPPER (p+j)^4 / (p...(p+j)); the term
    ratio is below e^(4/(p+j))/(p+j+1) <= 1 - 1/E_UPPER for p >= 2 and
    j >= 4, so the sum is at most E_UPPER times its first term.
    """
    if p < 2 or j_from < 4:
        raise PreconditionError("remainder bound needs p >= 2 and j_from >= 4")
    den = 1
    for i in range(j_from + 1):
        den *= p + i
    return ZETA4_UPPER * E_UPPER * Fraction((p + j_from) ** 4, den)


@dataclass(frozen=True)
class TailExpansion:
    """Four leading terms of (p-1)! sum_{n>=p} sigma_4(n)/n!, plus a tail bound.

    terms[j] = sigma_4(p+j) / (p (p+1) ... (p+j)) exactly, j = 0..3;
    remainder_bound majorizes everything from n = p+4 on.
    """

    p: int
    terms: tuple[Fraction, Fraction, Fraction, Fraction]
    remainder_bound: Fraction

    def __post_init__(self):
        if self.remainder_bound < 0:
            raise PreconditionError("remainder bound must be nonnegative")
        if self.remainder_bound > Fraction(6, self.p):
            raise PreconditionError(
                f"remainder bound {float(self.remainder_bound):.4g} exceeds 6/p at p={self.p}"
            )

    def leading_sum(self) -> Fraction:
        return sum(self.terms, Fraction(0))


def tail_expansion(p: int, spf: SpfTable | None = None) -> TailExpansion:
    """The four-term expansion at a prime p >= 11."""
    if p < 11:
        raise PreconditionError(f"tail_expansion needs p >= 11, got {p}")
    if not is_prime(p):
        raise PreconditionError(f"tail_expansion needs a prime, got {p}")
    dens = _falling_products(p, 4)
    terms = tuple(
        Fraction(sigma_k(p + j, 4, spf), dens[j]) for j in range(4)
    )
    return TailExpansion(p=p, terms=terms, remainder_bound=_tail_remainder_bound(p, 4))


def tail_partial(
    p: int, j_max: int, spf: SpfTable | None = None
) -> tuple[Fraction, Fraction]:
    """Exact sum of tail terms j = 4..j_max, plus a bound for j > j_max."""
    if j_max < 4:
        raise PreconditionError("tail_partial needs j_max >= 4")
    den = 1
    for i in range(4):
        den *= p + i
    total = Fraction(0)
    for j in range(4, j_max + 1):
        den *= p + j
        total += Fraction(sigma_k(p + j, 4, spf), den)
    return total, _tail_remainder_bound(p, j_max + 1)


# -- the near-integer statistic ---------------------------------------------


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise PreconditionError(f"expected a prime, got {p}")


def prop1_statistic_exact(p: int, spf: SpfTable | None = None) -> Fraction:
    """Exact || sigma_4(p+1)/(p(p+1)) + 1/16 || at a prime p."""
    _require_prime(p)
    theta = Fraction(sigma_k(p + 1, 4, spf), p * (p + 1)) + Fraction(1, 16)
    f = theta % 1
    return min(f, 1 - f)


def prop1_statistic(p: int, spf: SpfTable | None = None) -> BigRealWithError:
    """The same statistic wrapped with its (conversion-only) error radius."""
    return BigRealWithError.exact(prop1_statistic_exact(p, spf))


def prop1_statistic_with_r_exact(
    p: int, r: int, spf: SpfTable | None = None
) -> Fraction:
    """Exact || sigma_4(p+1)/(p(p+1)) + 1/16 + (p+1)/r^4 || for r | p+2, r > 1."""
    _require_prime(p)
    if r <= 1 or (p + 2) % r != 0:
        raise PreconditionError(f"r={r} must be a divisor > 1 of p+2 = {p + 2}")
    theta = (
        Fraction(sigma_k(p + 1, 4, spf), p * (p + 1))
        + Fraction(1, 16)
        + Fraction(p + 1, r**4)
    )
    f = theta % 1
    return min(f, 1 - f)


def prop1_statistic_with_r(p: int, r: int, spf: SpfTable | None = None) -> BigRealWithError:
    return BigRealWithError.exact(prop1_statistic_with_r_exact(p, r, spf))


# -- residuals of the term-by-term expansion ---------------------------------


def _divisor_defect_bound(m: int, spf: SpfTable | None = None) -> Fraction:
    """Bound for sigma_4(m)/m^4 - 1 = sum_{d|m, d>1} d^-4 via the least factor.

    Divisors above q0 are distinct integers, so their fourth-power
    reciprocals are dominated by q0^-4 plus the integral tail q0^-3/3.
    """
    if m == 1:
        return Fraction(0)
    q0 = factorize(m, spf).least_prime_factor()
    return Fraction(1, q0**4) + Fraction(1, 3 * q0**3)


def expansion_residuals(
    p: int,
    r: int | None = None,
    j_max: int = 32,
    spf: SpfTable | None = None,
) -> list[dict]:
    """Labeled residuals of the four-term expansion at a prime p.

    Each row is {label, value, bound} with exact rational value and, for
    all rows except the reported-only one, an explicit rational bound
    that the value is asserted (by the test layer) to respect:

      p_term            sigma_4(p)/p - p^3, equal to 1/p exactly
      seventeen_sixteenths  (p = 3 mod 4 only) the (p+3)-term minus 17/16
      p2_split          inverse-cube substitution error in the (p+2)-term
      p2_divisor_tail   divisors of p+2 beyond the leading (and r) parts
      p2_quartic_drop   3 sigma_4(p+2)/(p+2)^4 - 3, reported without a bound
      tail_majorant     exact j>=4 partial sum + remainder vs the majorant
    """
    _require_prime(p)
    if r is not None and (r <= 1 or (p + 2) % r != 0):
        raise PreconditionError(f"r={r} must be a divisor > 1 of p+2 = {p + 2}")
    rows: list[dict] = []

    # n = p: sigma_4(p) = p^4 + 1, so the term is p^3 + 1/p on the nose
    v0 = Fraction(sigma_k(p, 4, spf), p) - p**3
    if v0 != Fraction(1, p):
        raise PreconditionError("sigma_4(p)/p - p^3 != 1/p; p is not prime")
    rows.append({"label": "p_term", "value": v0, "bound": Fraction(1, p)})

    dens = _falling_products(p, 4)

    # n = p+3: for p = 3 mod 4, (p+3)/2 is odd and sigma_4(p+3) = 17 sigma_4((p+3)/2)
    if p % 4 == 3:
        m = (p + 3) // 2
        v3 = Fraction(sigma_k(p + 3, 4, spf), dens[3]) - Fraction(17, 16)
        defect = _divisor_defect_bound(m, spf)
        b3 = Fraction(17, 16) * (ZETA4_UPPER * Fraction(8, p) + defect)
        rows.append({"label": "seventeen_sixteenths", "value": v3, "bound": b3})

    # n = p+2: replacing 1/(p(p+1)(p+2)) by (p+2)^-3 + 3(p+2)^-4
    s4p2 = sigma_k(p + 2, 4, spf)
    split = (
        Fraction(1, dens[2])
        - Fraction(1, (p + 2) ** 3)
        - Fraction(3, (p + 2) ** 4)
    )
    rows.append(
        {
            "label": "p2_split",
            "value": s4p2 * split,
            "bound": 16 * ZETA4_UPPER * Fraction(1, p + 2),
        }
    )

    # divisors of p+2 beyond d=1 (and beyond d=r when an r is singled out)
    n2 = p + 2
    dtail = Fraction(s4p2, n2**3) - n2
    counted = [d for d in factorize(n2, spf).divisors() if d > 1]
    if r is not None:
        dtail -= Fraction(n2, r**4)
        counted = [d for d in counted if d != r]
    if counted:
        q0 = counted[0]
        btail = n2 * (Fraction(1, q0**4) + Fraction(1, 3 * q0**3))
    else:
        btail = Fraction(0)
    rows.append({"label": "p2_divisor_tail", "value": dtail, "bound": btail})

    # the quartic term the expansion rounds to 3: reported, never asserted
    rows.append(
        {
            "label": "p2_quartic_drop",
            "value": Fraction(3 * s4p2, n2**4) - 3,
            "bound": None,
        }
    )

    # everything from n = p+4: exact partial plus remainder, against the majorant
    part, rem = tail_partial(p, j_max, spf)
    rows.append(
        {
            "label": "tail_majorant",
            "value": part + rem,
            "bound": _tail_remainder_bound(p, 4),
        }
    )
    return rows
