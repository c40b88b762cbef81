"""Exact integer arithmetic: primality, factoring, multiplicative functions.

Everything in this module is deterministic. Primality uses a fixed
strong-pseudoprime base set that is a proven classifier below 3.3e14 and
refuses larger inputs rather than degrade to "probably". Factoring uses
a least-prime-factor table when one is supplied and in range, trial
division by small primes otherwise, and a Brent-cycle splitter for the
surviving cofactors.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath as mp
import numpy as np

from .bigreal import BigRealWithError
from .errors import BudgetError, PreconditionError

__all__ = [
    "MR_DETERMINISTIC_LIMIT",
    "DEFAULT_TABLE_LIMIT",
    "SpfTable",
    "Factorization",
    "PrimeRange",
    "memory_budget_mb",
    "primes_upto",
    "is_prime",
    "next_prime_above",
    "build_spf_table",
    "factorize",
    "sigma_k",
    "mobius",
    "euler_phi",
    "omega",
    "tau",
    "least_prime_factor",
    "greatest_prime_factor",
    "is_squarefree",
    "divisors",
    "crt_combine",
    "distance_to_nearest_integer",
]

# Strong-pseudoprime bases 2..17 admit no composite below 3.4e14
# (Jaeschke; Sorenson-Webster). Stay under it with a round margin.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17)
MR_DETERMINISTIC_LIMIT = 330_000_000_000_000

DEFAULT_TABLE_LIMIT = 10**8
DEFAULT_BUDGET_MB = 512

_SMALL_LIMIT = 1 << 16
_small_primes: list[int] | None = None


def memory_budget_mb() -> int:
    """Active memory budget in MB (ALPHA4_BUDGET_MB env, default 512)."""
    raw = os.environ.get("ALPHA4_BUDGET_MB")
    if raw is None:
        return DEFAULT_BUDGET_MB
    try:
        v = int(raw)
    except ValueError:
        raise PreconditionError(f"ALPHA4_BUDGET_MB must be an integer, got {raw!r}")
    if v <= 0:
        raise PreconditionError("ALPHA4_BUDGET_MB must be positive")
    return v


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n, as an int64 array (empty for n < 2)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def _get_small_primes() -> list[int]:
    global _small_primes
    if _small_primes is None:
        _small_primes = [int(p) for p in primes_upto(_SMALL_LIMIT)]
    return _small_primes


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n < 3.3e14 (errors above)."""
    if n < 0 or n >= MR_DETERMINISTIC_LIMIT:
        raise PreconditionError(
            f"is_prime is certified only below {MR_DETERMINISTIC_LIMIT}, got {n}"
        )
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_above(n: int) -> int:
    """Smallest prime strictly greater than n."""
    k = max(n + 1, 2)
    while not is_prime(k):
        k += 1
    return k


# -- least-prime-factor tables ------------------------------------------

_SPF_MAGIC = b"SPF1"


@dataclass
class SpfTable:
    """Least-prime-factor table for 0..limit (uint32; entries 0 and 1 are 0)."""

    limit: int
    spf: np.ndarray

    def least_prime_factor(self, n: int) -> int:
        if not 2 <= n <= self.limit:
            raise PreconditionError(f"n={n} outside table range 2..{self.limit}")
        return int(self.spf[n])

    def factor_pairs(self, n: int) -> list[tuple[int, int]]:
        if not 1 <= n <= self.limit:
            raise PreconditionError(f"n={n} outside table range 1..{self.limit}")
        t = self.spf
        pairs: list[tuple[int, int]] = []
        while n > 1:
            p = int(t[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            pairs.append((p, e))
        return pairs

    def dump(self, path: str) -> None:
        with open(path, "wb") as fh:
            fh.write(_SPF_MAGIC)
            fh.write(struct.pack("<Q", self.limit))
            fh.write(self.spf.astype("<u4", copy=False).tobytes())

    @staticmethod
    def load(path: str) -> "SpfTable":
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != _SPF_MAGIC:
                raise PreconditionError(f"not a least-factor table file: {path}")
            (limit,) = struct.unpack("<Q", fh.read(8))
            data = np.frombuffer(fh.read(), dtype="<u4")
        if data.size != limit + 1:
            raise PreconditionError(
                f"table file truncated: expected {limit + 1} entries, got {data.size}"
            )
        return SpfTable(limit=int(limit), spf=data.astype(np.uint32))


def build_spf_table(limit: int = DEFAULT_TABLE_LIMIT, budget_mb: int | None = None) -> SpfTable:
    """Sieve least prime factors up to `limit` (4 bytes per entry).

    Refuses to allocate past the active memory budget rather than swap.
    """
    if limit < 2:
        raise PreconditionError("table limit must be at least 2")
    if limit >= 2**32:
        raise PreconditionError("table entries are uint32; limit must be < 2^32")
    budget = (budget_mb if budget_mb is not None else memory_budget_mb()) * 1024 * 1024
    need = 4 * (limit + 1)
    if need > budget:
        raise BudgetError(
            f"least-factor table for limit={limit} needs {need // 2**20} MB, "
            f"budget is {budget // 2**20} MB"
        )
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    # whatever is still unmarked (above index 1) is prime
    unmarked = np.nonzero(spf[2:] == 0)[0] + 2
    spf[unmarked] = unmarked
    return SpfTable(limit=limit, spf=spf)


# -- factorization -------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """n as an ordered tuple of (prime, exponent) pairs."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        m = 1
        last = 1
        for p, e in self.pairs:
            if p <= last or e < 1:
                raise PreconditionError("factor pairs must have increasing primes and e >= 1")
            last = p
            m *= p**e
        if m != self.n:
            raise PreconditionError(f"pairs multiply to {m}, not {self.n}")

    def sigma(self, k: int) -> int:
        """Sum of k-th powers of divisors (k >= 0)."""
        if k < 0:
            raise PreconditionError("divisor-power exponent must be nonnegative")
        out = 1
        for p, e in self.pairs:
            if k == 0:
                out *= e + 1
            else:
                pk = p**k
                out *= (pk ** (e + 1) - 1) // (pk - 1)
        return out

    def mobius(self) -> int:
        if any(e > 1 for _, e in self.pairs):
            return 0
        return -1 if len(self.pairs) % 2 else 1

    def euler_phi(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= (p - 1) * p ** (e - 1)
        return out

    def omega(self) -> int:
        return len(self.pairs)

    def tau(self) -> int:
        return self.sigma(0)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.pairs)

    def least_prime_factor(self) -> int:
        if not self.pairs:
            raise PreconditionError("1 has no prime factors")
        return self.pairs[0][0]

    def greatest_prime_factor(self) -> int:
        if not self.pairs:
            raise PreconditionError("1 has no prime factors")
        return self.pairs[-1][0]

    def divisors(self) -> list[int]:
        out = [1]
        for p, e in self.pairs:
            out = [d * p**i for d in out for i in range(e + 1)]
        return sorted(out)


def _brent_factor(n: int, seed: int = 1) -> int:
    """A nontrivial factor of odd composite n (Brent's cycle method)."""
    if n % 2 == 0:
        return 2
    c = seed
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1  # cycle collapsed; retry with a different polynomial


def _split_cofactor(n: int, out: list[int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out.append(n)
        return
    d = _brent_factor(n)
    _split_cofactor(d, out)
    _split_cofactor(n // d, out)


def factorize(n, spf: SpfTable | None = None) -> Factorization:
    """Full factorization of n >= 1.

    Accepts a Factorization and returns it unchanged, so multiplicative
    functions can take either form. Uses the least-factor table when it
    covers n; otherwise trial division to 2^16 and deterministic
    splitting of the cofactor (certified primality required, so inputs
    whose cofactors reach 3.3e14 are rejected rather than guessed at).
    """
    if isinstance(n, Factorization):
        return n
    n = int(n)
    if n < 1:
        raise PreconditionError(f"factorize needs n >= 1, got {n}")
    if n == 1:
        return Factorization(1, ())
    if spf is not None and n <= spf.limit:
        return Factorization(n, tuple(spf.factor_pairs(n)))
    pairs: list[tuple[int, int]] = []
    rem = n
    for p in _get_small_primes():
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            pairs.append((p, e))
    if rem > 1:
        if rem < _SMALL_LIMIT * _SMALL_LIMIT or is_prime(rem):
            # below 2^32 the remaining part is prime (no factor <= 2^16)
            pairs.append((rem, 1))
        else:
            primes: list[int] = []
            _split_cofactor(rem, primes)
            primes.sort()
            i = 0
            while i < len(primes):
                j = i
                while j < len(primes) and primes[j] == primes[i]:
                    j += 1
                pairs.append((primes[i], j - i))
                i = j
    pairs.sort()
    return Factorization(n, tuple(pairs))


# -- multiplicative functions (int or Factorization input) ----------------


def sigma_k(n, k: int, spf: SpfTable | None = None) -> int:
    """Sum of k-th powers of the divisors of n."""
    return factorize(n, spf).sigma(k)


def mobius(n, spf: SpfTable | None = None) -> int:
    return factorize(n, spf).mobius()


def euler_phi(n, spf: SpfTable | None = None) -> int:
    return factorize(n, spf).euler_phi()


def omega(n, spf: SpfTable | None = None) -> int:
    """Number of distinct prime factors."""
    return factorize(n, spf).omega()


def tau(n, spf: SpfTable | None = None) -> int:
    """Number of divisors."""
    return factorize(n, spf).tau()


def least_prime_factor(n, spf: SpfTable | None = None) -> int:
    return factorize(n, spf).least_prime_factor()


def greatest_prime_factor(n, spf: SpfTable | None = None) -> int:
    return factorize(n, spf).greatest_prime_factor()


def is_squarefree(n, spf: SpfTable | None = None) -> bool:
    return factorize(n, spf).is_squarefree()


def divisors(n, spf: SpfTable | None = None) -> list[int]:
    return factorize(n, spf).divisors()


# -- prime ranges ---------------------------------------------------------


@dataclass
class PrimeRange:
    """Primes in the half-open interval (lo, hi], generated in segments."""

    lo: int
    hi: int
    segment: int = 1 << 20

    def __post_init__(self):
        # float endpoints keep (lo, hi] semantics: p > lo iff p > floor(lo),
        # p <= hi iff p <= floor(hi), since p is an integer
        self.lo = math.floor(self.lo)
        self.hi = math.floor(self.hi)
        if self.lo < 0 or self.hi < self.lo:
            raise PreconditionError(f"bad prime range ({self.lo}, {self.hi}]")

    def __iter__(self):
        lo, hi = self.lo, self.hi
        if hi < 2:
            return
        base = primes_upto(math.isqrt(hi))
        start = max(lo + 1, 2)
        while start <= hi:
            end = min(start + self.segment - 1, hi)
            mask = np.ones(end - start + 1, dtype=bool)
            for p in base:
                p = int(p)
                if p * p > end:
                    break
                first = max(p * p, ((start + p - 1) // p) * p)
                mask[first - start :: p] = False
            if start == 1:
                mask[0] = False
            for q in np.nonzero(mask)[0]:
                yield start + int(q)
            start = end + 1

    def to_list(self) -> list[int]:
        return list(self)


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo < p <= hi."""
    return PrimeRange(lo, hi).to_list()


# -- CRT and nearest-integer distance --------------------------------------


def crt_combine(congruences) -> tuple[int, int]:
    """Merge residue conditions [(r1, m1), (r2, m2), ...] into one.

    Moduli must be pairwise coprime; the offending gcd is reported
    otherwise. Returns (r, M) with 0 <= r < M = product of moduli.
    """
    congruences = list(congruences)
    if not congruences:
        return (0, 1)
    r, m = 0, 1
    for ri, mi in congruences:
        ri, mi = int(ri), int(mi)
        if mi <= 0:
            raise PreconditionError(f"modulus must be positive, got {mi}")
        g = math.gcd(m, mi)
        if g != 1:
            raise PreconditionError(
                f"moduli are not pairwise coprime: gcd witness {g} "
                f"(accumulated modulus {m}, next modulus {mi})"
            )
        t = ((ri - r) * pow(m, -1, mi)) % mi
        r += m * t
        m *= mi
    return (r % m, m)


def distance_to_nearest_integer(theta):
    """||theta||, dispatching on the input type.

    Exact rationals give an exact Fraction; floats give a float; mpf
    gives an mpf at the working precision; a BigRealWithError gives its
    (lo, hi, decided) distance interval.
    """
    if isinstance(theta, BigRealWithError):
        return theta.distance_interval()
    if isinstance(theta, int):
        return Fraction(0)
    if isinstance(theta, Rational):
        f = Fraction(theta) % 1
        return min(f, 1 - f)
    if isinstance(theta, mp.mpf):
        f = theta - mp.floor(theta)
        return min(f, 1 - f)
    f = float(theta) % 1.0
    return min(f, 1.0 - f)
