"""Enumeration of the sifted prime set and its class bookkeeping.

A prime p in (x/2, x] belongs to the set S when

  * p = -1 mod W (the small-prime localization),
  * p+2 is squarefree with least prime factor above z_quarter_lo and at
    most one prime factor in the window (z_quarter_lo, z_quarter_hi],
  * (p+3)/2 has least prime factor above z_small.

Members split into two classes by the window factor of p+2: none, or
exactly one (called r). Alongside S, four counting families track how
often the near-integer statistic is small, with and without the
r-correction, and how the smooth/rough split of p+1 interacts; their
exact definitions are in count_sigmas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import (
    Factorization,
    PrimeRange,
    SpfTable,
    build_spf_table,
    factorize,
    primes_in,
)
from .errors import PreconditionError
from .series import prop1_statistic_exact, prop1_statistic_with_r_exact
from .sieve import ScaleParams

__all__ = [
    "SpecialPrimeRecord",
    "SigmaCounters",
    "enumerate_S",
    "count_sigmas",
    "partition_check",
    "near_integer_histogram",
    "convenient_factor_filter",
    "convenient_factor_density",
]

CLASS_NO_MID = "no_mid_factor"
CLASS_ONE_MID = "one_mid_factor"


@dataclass(frozen=True)
class SpecialPrimeRecord:
    """One member of S with its factorizations and statistics.

    factor_p1, factor_p2 factorize p+1 and p+2; factor_p3 factorizes the
    odd half (p+3)/2. stat_plain is the exact distance of
    sigma_4(p+1)/(p(p+1)) + 1/16 from the nearest integer; stat_r adds
    (p+1)/r^4 first (only for the one_mid_factor class).
    """

    p: int
    klass: str
    r: int | None
    factor_p1: Factorization
    factor_p2: Factorization
    factor_p3: Factorization
    stat_plain: Fraction
    stat_r: Fraction | None

    def __post_init__(self):
        if self.klass not in (CLASS_NO_MID, CLASS_ONE_MID):
            raise PreconditionError(f"unknown class {self.klass!r}")
        if (self.r is None) != (self.klass == CLASS_NO_MID):
            raise PreconditionError("class and window factor disagree")
        if self.p % 4 != 3:
            raise PreconditionError("members satisfy p = 3 mod 4, so (p+3)/2 is odd")


def _candidate_primes(params: ScaleParams):
    """Primes p = -1 mod W in (x/2, x]."""
    x, w = params.x, params.W
    for p in PrimeRange(x // 2, x):
        if p % w == w - 1:
            yield p


def _ensure_spf(params: ScaleParams, spf: SpfTable | None) -> SpfTable | None:
    if spf is not None:
        return spf
    try:
        return build_spf_table(params.x + 3)
    except Exception:
        return None  # factorize falls back to direct methods


def enumerate_S(params: ScaleParams, spf: SpfTable | None = None) -> list[SpecialPrimeRecord]:
    """All members of S at the given scale, in increasing order of p."""
    spf = _ensure_spf(params, spf)
    zs, zl, zh = params.z_small, params.z_quarter_lo, params.z_quarter_hi
    out: list[SpecialPrimeRecord] = []
    for p in _candidate_primes(params):
        f2 = factorize(p + 2, spf)
        if not f2.is_squarefree():
            continue
        if f2.least_prime_factor() <= zl:
            continue
        mids = [q for q, _ in f2.pairs if zl < q <= zh]
        if len(mids) > 1:
            continue
        f3 = factorize((p + 3) // 2, spf)
        if f3.pairs and f3.least_prime_factor() <= zs:
            continue
        f1 = factorize(p + 1, spf)
        stat_plain = prop1_statistic_exact(p, spf)
        if mids:
            r = mids[0]
            rec = SpecialPrimeRecord(
                p=p,
                klass=CLASS_ONE_MID,
                r=r,
                factor_p1=f1,
                factor_p2=f2,
                factor_p3=f3,
                stat_plain=stat_plain,
                stat_r=prop1_statistic_with_r_exact(p, r, spf),
            )
        else:
            rec = SpecialPrimeRecord(
                p=p,
                klass=CLASS_NO_MID,
                r=None,
                factor_p1=f1,
                factor_p2=f2,
                factor_p3=f3,
                stat_plain=stat_plain,
                stat_r=None,
            )
        out.append(rec)
    return out


@dataclass(frozen=True)
class SigmaCounters:
    """The four counting families at scale x, plus the size of S.

    sigma1 counts primes; sigma2..sigma4 count (p, r) pairs. By
    construction every sigma2 pair lands in sigma3 or sigma4, so
    sigma2 <= sigma3 + sigma4 always; a violation means the conditions
    were implemented wrong and is raised loudly.
    """

    sigma1: int
    sigma2: int
    sigma3: int
    sigma4: int
    S_total: int
    parameters: ScaleParams
    delta: float

    def __post_init__(self):
        if min(self.sigma1, self.sigma2, self.sigma3, self.sigma4, self.S_total) < 0:
            raise PreconditionError("counters must be nonnegative")
        if self.sigma2 > self.sigma3 + self.sigma4:
            raise PreconditionError(
                f"sigma2 = {self.sigma2} exceeds sigma3 + sigma4 = "
                f"{self.sigma3 + self.sigma4}; the pair conditions are inconsistent"
            )

    def witness_gap(self) -> int:
        """max(0, |S| - sigma1 - sigma2): how much of S the two near-integer
        families fail to cover (diagnostic, not an asserted bound)."""
        return max(0, self.S_total - self.sigma1 - self.sigma2)


def count_sigmas(
    params: ScaleParams,
    delta: float,
    spf: SpfTable | None = None,
    records: list[SpecialPrimeRecord] | None = None,
) -> SigmaCounters:
    """Count the four families over the base set of candidates.

    Base set: primes p = -1 mod W in (x/2, x] whose odd half (p+3)/2 has
    no prime factor <= z_small. Then, with the window (z_lo, z_hi]:

      sigma1: P-(p+2) > z_hi and the plain statistic is <= delta
              (no squarefreeness asked of p+2);
      sigma2: pairs (p, r), r a window prime dividing p+2 with
              P-((p+2)/r) > z_hi, and the r-corrected statistic <= delta;
      sigma3: pairs (p, r), r a window prime dividing p+2,
              P-(p+2) > z_lo, and p+1 is x^smooth_exp-smooth;
      sigma4: pairs like sigma3 but p+1 not smooth, and the r-corrected
              statistic <= delta.

    delta is compared exactly, at the binary value of the given float.
    """
    spf = _ensure_spf(params, spf)
    zs, zl, zh = params.z_small, params.z_quarter_lo, params.z_quarter_hi
    d = Fraction(delta)
    y_smooth = params.x**params.smooth_exp
    s1 = s2 = s3 = s4 = 0
    for p in _candidate_primes(params):
        f3 = factorize((p + 3) // 2, spf)
        if f3.pairs and f3.least_prime_factor() <= zs:
            continue
        f2 = factorize(p + 2, spf)
        lpf2 = f2.least_prime_factor()
        if lpf2 > zh and prop1_statistic_exact(p, spf) <= d:
            s1 += 1
        window_rs = [q for q, _ in f2.pairs if zl < q <= zh]
        if not window_rs:
            continue
        rough = lpf2 > zl
        smooth = None
        for r in window_rs:
            cof = (p + 2) // r
            cof_ok = cof == 1 or factorize(cof, spf).least_prime_factor() > zh
            stat_r_small = None
            if cof_ok:
                stat_r_small = prop1_statistic_with_r_exact(p, r, spf) <= d
                if stat_r_small:
                    s2 += 1
            if rough:
                if smooth is None:
                    smooth = factorize(p + 1, spf).greatest_prime_factor() <= y_smooth
                if smooth:
                    s3 += 1
                else:
                    if stat_r_small is None:
                        stat_r_small = prop1_statistic_with_r_exact(p, r, spf) <= d
                    if stat_r_small:
                        s4 += 1
    if records is None:
        records = enumerate_S(params, spf)
    return SigmaCounters(
        sigma1=s1,
        sigma2=s2,
        sigma3=s3,
        sigma4=s4,
        S_total=len(records),
        parameters=params,
        delta=float(delta),
    )


def partition_check(records: list[SpecialPrimeRecord], params: ScaleParams) -> dict:
    """Re-derive every membership condition and the two-class split.

    Returns per-condition failure counts (all zero for a correct
    enumeration) and the class tallies.
    """
    zs, zl, zh = params.z_small, params.z_quarter_lo, params.z_quarter_hi
    fails: dict[str, int] = {
        "range": 0,
        "residue": 0,
        "squarefree": 0,
        "least_factor": 0,
        "window_count": 0,
        "odd_half": 0,
        "class_label": 0,
        "stat_fields": 0,
    }
    first_bad = None
    counts = {CLASS_NO_MID: 0, CLASS_ONE_MID: 0}
    seen = set()
    for rec in records:
        bad = []
        p = rec.p
        if not params.x // 2 < p <= params.x:
            bad.append("range")
        if p % params.W != params.W - 1:
            bad.append("residue")
        if not rec.factor_p2.is_squarefree():
            bad.append("squarefree")
        if rec.factor_p2.least_prime_factor() <= zl:
            bad.append("least_factor")
        mids = [q for q, _ in rec.factor_p2.pairs if zl < q <= zh]
        if len(mids) > 1:
            bad.append("window_count")
        if rec.factor_p3.pairs and rec.factor_p3.least_prime_factor() <= zs:
            bad.append("odd_half")
        if rec.klass == CLASS_NO_MID:
            # no window factor means every factor of p+2 clears z_hi
            if mids or rec.factor_p2.least_prime_factor() <= zh:
                bad.append("class_label")
            if rec.stat_r is not None:
                bad.append("stat_fields")
        else:
            if len(mids) != 1 or rec.r != mids[0]:
                bad.append("class_label")
            if rec.stat_r is None:
                bad.append("stat_fields")
        counts[rec.klass] += 1
        if p in seen:
            bad.append("range")
        seen.add(p)
        for b in bad:
            fails[b] += 1
        if bad and first_bad is None:
            first_bad = {"p": p, "failed": bad}
    total_fail = sum(fails.values())
    return {
        "n_records": len(records),
        "class_counts": counts,
        "classes_sum_to_total": counts[CLASS_NO_MID] + counts[CLASS_ONE_MID] == len(records),
        "condition_failures": fails,
        "first_failure": first_bad,
        "ok": total_fail == 0
        and counts[CLASS_NO_MID] + counts[CLASS_ONE_MID] == len(records),
    }


def near_integer_histogram(records: list[SpecialPrimeRecord], bins: int = 20) -> dict:
    """Distribution of the statistics over [0, 1/2], with a uniformity score.

    If the underlying angles were uniform mod 1, the distance statistic
    would have CDF 2t on [0, 1/2]; the report includes the empirical
    sup-deviation from that line (a Kolmogorov-Smirnov-style statistic,
    purely diagnostic).
    """
    if bins < 1:
        raise PreconditionError("bins must be >= 1")
    plain = sorted(float(rec.stat_plain) for rec in records)
    withr = sorted(float(rec.stat_r) for rec in records if rec.stat_r is not None)

    def hist(vals):
        counts = [0] * bins
        for v in vals:
            i = min(int(v * 2 * bins), bins - 1)
            counts[i] += 1
        return counts

    def ks(vals):
        n = len(vals)
        if n == 0:
            return None
        worst = 0.0
        for i, t in enumerate(vals):
            cdf = min(1.0, 2 * t)
            worst = max(worst, abs((i + 1) / n - cdf), abs(i / n - cdf))
        return worst

    edges = [i / (2 * bins) for i in range(bins + 1)]
    return {
        "bins": bins,
        "edges": edges,
        "plain_counts": hist(plain),
        "r_counts": hist(withr),
        "n_plain": len(plain),
        "n_r": len(withr),
        "ks_plain": ks(plain),
        "ks_r": ks(withr),
    }


def convenient_factor_filter(n: int, lo: int, hi: int, spf: SpfTable | None = None) -> bool:
    """Whether n has a prime factor in (lo, hi]."""
    if n < 1:
        raise PreconditionError(f"need n >= 1, got {n}")
    if hi <= lo:
        raise PreconditionError(f"empty-ordered window ({lo}, {hi}]")
    return any(lo < q <= hi for q, _ in factorize(n, spf).pairs)


def convenient_factor_density(n_limit: int, lo: int, hi: int) -> dict:
    """Density of the filter over 1..n_limit against the Mertens heuristic.

    The expected density 1 - prod_{lo < p <= hi} (1 - 1/p) treats the
    divisibility events as exact proportions; over a finite range each
    prime p contributes floor-error O(1/n_limit), so agreement within a
    percent needs n_limit comfortably above hi. Reported, not asserted.
    """
    if n_limit < 1:
        raise PreconditionError("n_limit must be >= 1")
    flags = np.zeros(n_limit + 1, dtype=bool)
    for p in primes_in(lo, hi):
        if p <= n_limit:
            flags[p::p] = True
    density = float(np.count_nonzero(flags[1:])) / n_limit
    expected = 1.0
    for p in primes_in(lo, hi):
        expected *= 1.0 - 1.0 / p
    expected = 1.0 - expected
    return {
        "n_limit": n_limit,
        "window": [lo, hi],
        "density": density,
        "expected": expected,
        "abs_gap": abs(density - expected),
        "rel_gap": abs(density - expected) / expected if expected else math.inf,
    }
