"""Exponential sums with exact-rational phase reduction.

Phases come in three shapes: a quadratic-plus-inverse phase in a single
variable, its restriction to an arithmetic progression n = v + r*l
rewritten in the progression variable, and the linear inner phase left
by double differencing. Coefficients are exact rationals in the
arithmetic families and may be arbitrary reals (mpf) in the basic one.

Summation is deterministic regardless of worker count: terms are split
into fixed 4096-term chunks, each chunk is accumulated with compensated
(Neumaier) addition, and chunk partials are combined by a fixed-order
pairwise tree.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath as mp

from .arith import sigma_k
from .errors import BudgetError, PreconditionError

__all__ = [
    "PHASE_KINDS",
    "PhaseSpec",
    "ExpSumResult",
    "make_basic_phase",
    "make_lemma61_phase",
    "make_lemma62_inner_phase",
    "minus_inverse_residue",
    "coeff_A",
    "coeff_B",
    "phase_fraction",
    "phase_mpf",
    "required_prec_bits",
    "eval_phase",
    "lemma61_change_of_variables",
    "lemma61_ap_oracle",
    "inner62_coefficient",
    "inner62_magnitude",
    "weyl_difference_check",
    "f_ell_closed",
    "f_ell_integral",
    "f_ell_derivative",
    "f_ell_derivative_profile",
    "cancellation_scan",
    "SmoothingWindow",
    "smoothing_window",
]

PHASE_KINDS = ("basic", "lemma61", "lemma62_inner")
CHUNK = 4096
DEFAULT_TERM_BUDGET = 10**9
TAU = 2 * math.pi


# -- specs ---------------------------------------------------------------


@dataclass(frozen=True)
class PhaseSpec:
    """A summation task: which phase, its coefficients, and the range (lo, hi].

    basic:         A (n^2 + n^-2) + B (n + n^-3)
    lemma61:       A1 (2 v r l + r^2 l^2 + (v + r l)^-2) + A2 r l + (h m / r^3) l
                   with A1 = h sigma_4(m)/m^2, A2 = h sigma_4(m)/m^3,
                   summed over the progression variable l
    lemma62_inner: C(l1, l2) * n, the linear phase of the innermost sum
                   after differencing twice with shift j
    """

    kind: str
    lo: int
    hi: int
    A: object = None
    B: object = None
    h: int = 0
    m: int = 0
    r: int = 0
    v: int = 0
    j: int = 0
    l1: int = 0
    l2: int = 0
    sigma4_m: int = 0

    def __post_init__(self):
        if self.kind not in PHASE_KINDS:
            raise PreconditionError(f"kind must be one of {PHASE_KINDS}, got {self.kind!r}")
        if self.hi < self.lo:
            raise PreconditionError(f"empty-ordered range ({self.lo}, {self.hi}]")

    @property
    def n_terms(self) -> int:
        return self.hi - self.lo


def _coerce_real(x, name: str):
    """int/Fraction stay exact; floats are taken at their binary value."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, mp.mpf):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return mp.mpf(x)
    raise PreconditionError(f"{name} must be rational, float, mpf or str, got {type(x).__name__}")


def make_basic_phase(A, B, lo: int, hi: int) -> PhaseSpec:
    if lo < 0:
        raise PreconditionError("basic phase needs lo >= 0 (n^-2 requires n >= 1)")
    return PhaseSpec(kind="basic", lo=lo, hi=hi, A=_coerce_real(A, "A"), B=_coerce_real(B, "B"))


def minus_inverse_residue(m: int, r: int) -> int:
    """The representative of -m^(-1) mod r in (-r/2, r/2]."""
    if r < 2:
        raise PreconditionError(f"modulus r must be >= 2, got {r}")
    if math.gcd(m, r) != 1:
        raise PreconditionError(f"m={m} is not invertible mod r={r}")
    v = (-pow(m, -1, r)) % r
    if 2 * v > r:
        v -= r
    return v


def make_lemma61_phase(h: int, m: int, r: int, lo: int, hi: int, v: int | None = None) -> PhaseSpec:
    if m < 1 or r < 2:
        raise PreconditionError("need m >= 1 and r >= 2")
    if math.gcd(m, r) != 1:
        raise PreconditionError(f"m={m} and r={r} must be coprime")
    if lo < 0:
        raise PreconditionError("progression variable range needs lo >= 0")
    if v is None:
        v = minus_inverse_residue(m, r)
    else:
        if not -r < 2 * v <= r:
            raise PreconditionError(f"|v|={abs(v)} must satisfy -r/2 < v <= r/2")
        if (m * v + 1) % r != 0:
            raise PreconditionError(f"v={v} is not -m^(-1) mod r")
    return PhaseSpec(
        kind="lemma61", lo=lo, hi=hi, h=h, m=m, r=r, v=v, sigma4_m=sigma_k(m, 4)
    )


def make_lemma62_inner_phase(
    h: int, m: int, r: int, j: int, l1: int, l2: int, lo: int, hi: int
) -> PhaseSpec:
    if m < 1 or r < 1 or j < 1:
        raise PreconditionError("need m >= 1, r >= 1, j >= 1")
    if l1 < 1 or l2 < 1:
        raise PreconditionError("shift variables l1, l2 must be >= 1")
    return PhaseSpec(
        kind="lemma62_inner",
        lo=lo,
        hi=hi,
        h=h,
        m=m,
        r=r,
        j=j,
        l1=l1,
        l2=l2,
        sigma4_m=sigma_k(m, 4),
    )


# -- coefficients and phase values -----------------------------------------


def coeff_A(spec: PhaseSpec):
    """The quadratic-term coefficient (h sigma_4(m)/m^2 for lemma61)."""
    if spec.kind == "basic":
        return spec.A
    if spec.kind == "lemma61":
        return Fraction(spec.h * spec.sigma4_m, spec.m**2)
    raise PreconditionError("lemma62_inner has a single linear coefficient")


def coeff_B(spec: PhaseSpec):
    """The linear-term coefficient (h sigma_4(m)/m^3 for lemma61)."""
    if spec.kind == "basic":
        return spec.B
    if spec.kind == "lemma61":
        return Fraction(spec.h * spec.sigma4_m, spec.m**3)
    raise PreconditionError("lemma62_inner has a single linear coefficient")


def inner62_coefficient(spec: PhaseSpec, l1: int | None = None, l2: int | None = None) -> Fraction:
    """C(l1, l2) = A1 (2 j r^2 (l1 - l2) + r^-2 [(l1+j)^-2 - l1^-2 - (l2+j)^-2 + l2^-2])."""
    if spec.kind != "lemma62_inner":
        raise PreconditionError("inner coefficient is defined for lemma62_inner specs")
    l1 = spec.l1 if l1 is None else l1
    l2 = spec.l2 if l2 is None else l2
    if l1 < 1 or l2 < 1:
        raise PreconditionError("l1, l2 must be >= 1")
    a1 = Fraction(spec.h * spec.sigma4_m, spec.m**2)
    j, r = spec.j, spec.r
    bracket = 2 * j * r**2 * (l1 - l2) + Fraction(1, r**2) * (
        Fraction(1, (l1 + j) ** 2)
        - Fraction(1, l1**2)
        - Fraction(1, (l2 + j) ** 2)
        + Fraction(1, l2**2)
    )
    return a1 * bracket


def phase_fraction(spec: PhaseSpec, n: int) -> Fraction:
    """The exact phase value at index n (requires rational coefficients)."""
    if spec.kind == "basic":
        A, B = spec.A, spec.B
        if not (isinstance(A, Fraction) and isinstance(B, Fraction)):
            raise PreconditionError("exact phase needs rational coefficients; use phase_mpf")
        if n == 0:
            raise PreconditionError("basic phase is undefined at n = 0")
        return A * (Fraction(n**2) + Fraction(1, n**2)) + B * (n + Fraction(1, n**3))
    if spec.kind == "lemma61":
        a1 = Fraction(spec.h * spec.sigma4_m, spec.m**2)
        a2 = Fraction(spec.h * spec.sigma4_m, spec.m**3)
        c = Fraction(spec.h * spec.m, spec.r**3)
        inner = spec.v + spec.r * n
        if inner == 0:
            raise PreconditionError("progression hits v + r l = 0")
        return (
            a1 * (2 * spec.v * spec.r * n + spec.r**2 * n**2 + Fraction(1, inner**2))
            + a2 * spec.r * n
            + c * n
        )
    return inner62_coefficient(spec) * n


def phase_mpf(spec: PhaseSpec, n: int) -> mp.mpf:
    """The phase at index n in mpf arithmetic at the ambient precision."""
    if spec.kind == "basic":
        A = spec.A if isinstance(spec.A, mp.mpf) else mp.mpf(spec.A.numerator) / spec.A.denominator
        B = spec.B if isinstance(spec.B, mp.mpf) else mp.mpf(spec.B.numerator) / spec.B.denominator
        if n == 0:
            raise PreconditionError("basic phase is undefined at n = 0")
        nn = mp.mpf(n)
        return A * (nn**2 + 1 / nn**2) + B * (nn + 1 / nn**3)
    fr = phase_fraction(spec, n)
    return mp.mpf(fr.numerator) / fr.denominator


def required_prec_bits(spec: PhaseSpec) -> int:
    """Working precision for the mpf engine: bits of the largest phase plus 64."""
    hi = max(abs(spec.lo) + 1, abs(spec.hi), 1)
    if spec.kind == "basic":
        mag = (abs(float(spec.A)) + 1) * hi * hi + (abs(float(spec.B)) + 1) * hi
    elif spec.kind == "lemma61":
        a1 = abs(spec.h) * spec.sigma4_m / spec.m**2
        mag = (a1 + 1) * (spec.r * hi + abs(spec.v)) ** 2 + abs(spec.h) * spec.m * hi
    else:
        mag = (abs(float(inner62_coefficient(spec))) + 1) * hi
    return max(64, int(math.log2(mag + 2))) + 64


# -- deterministic summation ------------------------------------------------


def _e_unit(t: float) -> complex:
    return complex(math.cos(TAU * t), math.sin(TAU * t))


def _chunk_exact(args) -> tuple[float, float]:
    """Compensated sum of e(phase(n)) for n in (a, b] (exact phase mod 1)."""
    spec, a, b = args
    sr = cr = si = ci = 0.0
    for n in range(a + 1, b + 1):
        t = float(phase_fraction(spec, n) % 1)
        x = math.cos(TAU * t)
        y = math.sin(TAU * t)
        u = sr + x
        cr += (sr - u) + x if abs(sr) >= abs(x) else (x - u) + sr
        sr = u
        u = si + y
        ci += (si - u) + y if abs(si) >= abs(y) else (y - u) + si
        si = u
    return (sr + cr, si + ci)


def _tree_reduce(parts: list[complex]) -> complex:
    while len(parts) > 1:
        nxt = []
        for i in range(0, len(parts) - 1, 2):
            nxt.append(parts[i] + parts[i + 1])
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0] if parts else 0j


@dataclass(frozen=True)
class ExpSumResult:
    """value may be a complex or an mpc; normalized_modulus = |value|/n_terms."""

    value: object
    n_terms: int
    normalized_modulus: float


def _is_exact_spec(spec: PhaseSpec) -> bool:
    if spec.kind != "basic":
        return True
    return isinstance(spec.A, Fraction) and isinstance(spec.B, Fraction)


def eval_phase(
    spec: PhaseSpec,
    threads: int = 1,
    engine: str | None = None,
    prec_bits: int | None = None,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> ExpSumResult:
    """Sum e(phase(n)) over n in (lo, hi].

    engine "exact" reduces each phase mod 1 in rational arithmetic and
    sums unit vectors in compensated double precision; engine "mpf"
    works at prec_bits (default: enough for the largest phase plus 64
    guard bits). Default picks "exact" when the coefficients allow it.
    """
    n = spec.n_terms
    if n > term_budget:
        raise BudgetError(f"{n} terms exceed the term budget {term_budget}")
    if engine is None:
        engine = "exact" if _is_exact_spec(spec) else "mpf"
    if engine not in ("exact", "mpf"):
        raise PreconditionError(f"engine must be 'exact' or 'mpf', got {engine!r}")
    if n == 0:
        return ExpSumResult(value=0j, n_terms=0, normalized_modulus=0.0)

    if engine == "exact":
        if not _is_exact_spec(spec):
            raise PreconditionError("exact engine needs rational coefficients")
        bounds = list(range(spec.lo, spec.hi, CHUNK)) + [spec.hi]
        jobs = [(spec, a, b) for a, b in zip(bounds[:-1], bounds[1:])]
        if threads > 1 and n >= 4 * CHUNK:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(_chunk_exact, jobs, chunksize=4))
        else:
            parts = [_chunk_exact(j) for j in jobs]
        total = _tree_reduce([complex(re, im) for re, im in parts])
        mod = abs(total)
        return ExpSumResult(
            value=total, n_terms=n, normalized_modulus=min(1.0, mod / n)
        )

    prec = prec_bits if prec_bits is not None else required_prec_bits(spec)
    with mp.workprec(prec):
        total_m = mp.mpc(0)
        for k in range(spec.lo + 1, spec.hi + 1):
            ph = phase_mpf(spec, k)
            frac = ph - mp.floor(ph)
            total_m += mp.mpc(mp.cospi(2 * frac), mp.sinpi(2 * frac))
        mod = float(abs(total_m))
        return ExpSumResult(
            value=total_m, n_terms=n, normalized_modulus=min(1.0, mod / n)
        )


# -- progression rewrite checks ---------------------------------------------


def lemma61_change_of_variables(spec: PhaseSpec) -> dict:
    """Verify the rewrite of the basic phase along n = v + r l, exactly.

    With A = h sigma_4(m)/m^2 and B = h sigma_4(m)/m^3, for every l in
    the range:

        [A (n^2 + n^-2) + B (n + n^-3) + (h m / r^4) n] - phase(l)
            = A v^2 + B v + h m v / r^4 + B / n^3,   n = v + r l.

    The left side is the full single-variable phase (with its linear
    completion) minus the progression phase; the right side is a
    constant plus the cubic-inverse term the progression phase drops.
    Equality is checked as Fraction identities, term by term.
    """
    if spec.kind != "lemma61":
        raise PreconditionError("change-of-variables check needs a lemma61 spec")
    A = coeff_A(spec)
    B = coeff_B(spec)
    const = A * spec.v**2 + B * spec.v + Fraction(spec.h * spec.m * spec.v, spec.r**4)
    max_dropped = Fraction(0)
    for l in range(spec.lo + 1, spec.hi + 1):
        n = spec.v + spec.r * l
        single = (
            A * (Fraction(n**2) + Fraction(1, n**2))
            + B * (n + Fraction(1, n**3))
            + Fraction(spec.h * spec.m, spec.r**4) * n
        )
        diff = single - phase_fraction(spec, l)
        dropped = B * Fraction(1, n**3)
        if diff != const + dropped:
            return {
                "ok": False,
                "first_failure_l": l,
                "constant": const,
                "mismatch": diff - (const + dropped),
            }
        if abs(dropped) > max_dropped:
            max_dropped = abs(dropped)
    return {
        "ok": True,
        "constant": const,
        "max_dropped_term": max_dropped,
        "checked_terms": spec.n_terms,
    }


def lemma61_ap_oracle(spec: PhaseSpec) -> float:
    """|sum over the progression of e(A(n^2+n^-2) + B n + (h m / r^4) n)|.

    This equals |eval_phase(spec).value| exactly: the two phase families
    differ by a constant phase (modulus-invariant) once the B n^-3 term
    is dropped from both.
    """
    if spec.kind != "lemma61":
        raise PreconditionError("the progression oracle needs a lemma61 spec")
    A = coeff_A(spec)
    B = coeff_B(spec)
    lin = Fraction(spec.h * spec.m, spec.r**4)
    total = 0j
    for l in range(spec.lo + 1, spec.hi + 1):
        n = spec.v + spec.r * l
        ph = A * (Fraction(n**2) + Fraction(1, n**2)) + B * n + lin * n
        total += _e_unit(float(ph % 1))
    return abs(total)


def inner62_magnitude(spec: PhaseSpec) -> dict:
    """Split the inner linear coefficient into main and correction parts.

    main = A1 * 2 j r^2 (l1 - l2); the correction collects the four
    inverse squares and is at most 4 A1 / r^2 in modulus, giving a
    relative size below 2/(j r^4 |l1 - l2|) when l1 != l2. Antisymmetry
    in (l1, l2) and the zero diagonal are verified exactly.
    """
    if spec.kind != "lemma62_inner":
        raise PreconditionError("magnitude report needs a lemma62_inner spec")
    a1 = Fraction(spec.h * spec.sigma4_m, spec.m**2)
    coeff = inner62_coefficient(spec)
    main = a1 * 2 * spec.j * spec.r**2 * (spec.l1 - spec.l2)
    corr = coeff - main
    corr_bound = abs(a1) * Fraction(4, spec.r**2)
    anti = inner62_coefficient(spec, spec.l2, spec.l1)
    diag = inner62_coefficient(spec, spec.l1, spec.l1)
    out = {
        "coefficient": coeff,
        "main": main,
        "correction": corr,
        "correction_bound": corr_bound,
        "correction_within_bound": abs(corr) <= corr_bound,
        "antisymmetric": anti == -coeff,
        "zero_diagonal": diag == 0,
    }
    if spec.l1 != spec.l2:
        rel_bound = Fraction(2, spec.j * spec.r**4 * abs(spec.l1 - spec.l2))
        out["relative_correction"] = abs(corr) / abs(main) if main else None
        out["relative_bound"] = rel_bound
        out["relative_within_bound"] = main != 0 and abs(corr) <= rel_bound * abs(main)
    return out


# -- differencing ------------------------------------------------------------


def _abs_exact_sum(spec: PhaseSpec, shift_terms: list[tuple[int, int]], lo: int, hi: int) -> float:
    """|sum_{lo < n <= hi} e(sum_i sign_i phase(n + k_i))| with exact phases."""
    sr = si = 0.0
    for n in range(lo + 1, hi + 1):
        ph = Fraction(0)
        for k, sign in shift_terms:
            ph += sign * phase_fraction(spec, n + k)
        t = float(ph % 1)
        sr += math.cos(TAU * t)
        si += math.sin(TAU * t)
    return math.hypot(sr, si)


def weyl_difference_check(spec: PhaseSpec, K: int, L: int | None = None) -> dict:
    """Compare |S|^2 (and |S|^4) against differenced right-hand sides.

    First display (a theorem for 1 <= K <= N, boundary-restricted inner
    sums S_k over n with both n and n+k in range):

        |S|^2 <= 3 ( N^2/K + (N/K) sum_{1<=|k|<=K} |S_k| ).

    Second display (reported with the same constant; in the operating
    ranges exercised here the N^4/K^2 and N^3 max|S_{k,l}| terms leave
    wide slack):

        |S|^4 <= 3 ( N^4/K^2 + N^4/L + N^3 max_{k<=K, l<=L} |S_{k,l}| ).
    """
    if not _is_exact_spec(spec):
        raise PreconditionError("differencing checks need rational coefficients")
    N = spec.n_terms
    if not 1 <= K <= N:
        raise PreconditionError(f"need 1 <= K <= N = {N}, got K = {K}")
    if L is not None and not 1 <= L <= N:
        raise PreconditionError(f"need 1 <= L <= N = {N}, got L = {L}")
    S = abs(eval_phase(spec).value)
    sum_sk = 0.0
    for k in range(1, K + 1):
        sk = _abs_exact_sum(spec, [(k, 1), (0, -1)], spec.lo, spec.hi - k)
        sum_sk += 2 * sk  # |S_-k| = |S_k|
    lhs2 = S**2
    rhs2 = 3 * (N**2 / K + (N / K) * sum_sk)
    out = {
        "n_terms": N,
        "K": K,
        "abs_sum": S,
        "first_lhs": lhs2,
        "first_rhs": rhs2,
        "first_ratio": lhs2 / rhs2 if rhs2 else float("inf"),
        "first_ok": lhs2 <= rhs2,
        "first_is_theorem": True,
    }
    if L is not None:
        max_skl = 0.0
        for k in range(1, K + 1):
            for l in range(1, L + 1):
                if spec.hi - k - l <= spec.lo:
                    continue
                skl = _abs_exact_sum(
                    spec,
                    [(k + l, 1), (k, -1), (l, -1), (0, 1)],
                    spec.lo,
                    spec.hi - k - l,
                )
                max_skl = max(max_skl, skl)
        lhs4 = S**4
        rhs4 = 3 * (N**4 / K**2 + N**4 / L + N**3 * max_skl)
        out.update(
            {
                "L": L,
                "max_inner_abs": max_skl,
                "second_lhs": lhs4,
                "second_rhs": rhs4,
                "second_ratio": lhs4 / rhs4 if rhs4 else float("inf"),
                "second_ok": lhs4 <= rhs4,
                "second_is_theorem": False,
            }
        )
    return out


# -- the differenced amplitude function ---------------------------------------


def _delta2(g, n, k, l):
    return g(n) - g(n + k) - g(n + l) + g(n + k + l)


def f_ell_closed(A, B, k: int, l: int, n) -> Fraction:
    """A [n^-2 - (n+k)^-2 - (n+l)^-2 + (n+k+l)^-2] + B [same with cubes]."""
    A, B = Fraction(A), Fraction(B)
    n = Fraction(n)
    if min(n, n + k, n + l, n + k + l) <= 0:
        raise PreconditionError("arguments must stay positive")
    sq = _delta2(lambda t: 1 / t**2, n, k, l)
    cu = _delta2(lambda t: 1 / t**3, n, k, l)
    return A * sq + B * cu


def f_ell_integral(A, B, k: int, l: int, n, dps: int = 30) -> mp.mpf:
    """The same amplitude as the double integral

        int_0^k int_0^l [6 A (n+s+t)^-4 + 12 B (n+s+t)^-5] ds dt."""
    with mp.workdps(dps):
        Af, Bf, nf = mp.mpf(str(float(A))), mp.mpf(str(float(B))), mp.mpf(str(float(n)))
        if isinstance(A, (int, Fraction)):
            Af = mp.mpf(Fraction(A).numerator) / Fraction(A).denominator
        if isinstance(B, (int, Fraction)):
            Bf = mp.mpf(Fraction(B).numerator) / Fraction(B).denominator
        if isinstance(n, (int, Fraction)):
            nf = mp.mpf(Fraction(n).numerator) / Fraction(n).denominator
        return mp.quad(
            lambda s, t: 6 * Af / (nf + s + t) ** 4 + 12 * Bf / (nf + s + t) ** 5,
            [0, k],
            [0, l],
        )


def f_ell_derivative(A, B, k: int, l: int, n, j: int) -> Fraction:
    """Exact j-th derivative in n: inverse powers differentiate termwise."""
    if j < 0:
        raise PreconditionError("derivative order must be >= 0")
    A, B = Fraction(A), Fraction(B)
    n = Fraction(n)
    sign = -1 if j % 2 else 1
    ca = math.factorial(j + 1)          # d^j n^-2 = (-1)^j (j+1)! n^-(2+j)
    cb = math.factorial(j + 2) // 2     # d^j n^-3 = (-1)^j ((j+2)!/2) n^-(3+j)
    sq = _delta2(lambda t: 1 / t ** (2 + j), n, k, l)
    cu = _delta2(lambda t: 1 / t ** (3 + j), n, k, l)
    return sign * (A * ca * sq + B * cb * cu)


def f_ell_derivative_profile(A, B, k: int, l: int, Q: int, j_max: int = 4, samples: int = 9) -> dict:
    """Scaled derivative magnitudes of the amplitude over n in [Q, 2Q].

    For each order j <= j_max the ratio |f^(j)(n)| Q^(4+j) / (|A| k l)
    is reported against the bracket

        c1(j) = 0.9 (j+3)! / 2.5^(4+j),   c2(j) = 1.1 (j+3)!,

    which holds whenever Q >= 256, 1 <= k, l <= Q/4 and |B| <= |A|/Q
    (the mean-value argument places the A-term between (2.5Q)^-(4+j) and
    Q^-(4+j) times (j+3)! k l |A|, and the B-term is then a sub-percent
    correction). The sign of f itself is also compared against sign(A).
    """
    A, B = Fraction(A), Fraction(B)
    if A == 0:
        raise PreconditionError("A must be nonzero")
    if Q < 256:
        raise PreconditionError(f"profile brackets need Q >= 256, got {Q}")
    if not (1 <= k <= Q // 4 and 1 <= l <= Q // 4):
        raise PreconditionError("need 1 <= k, l <= Q/4")
    if abs(B) > abs(A) / Q:
        raise PreconditionError("need |B| <= |A|/Q for the stated brackets")
    if not 0 <= j_max <= 4:
        raise PreconditionError("j_max must be in 0..4")
    grid = [Q + (Q * i) // (samples - 1) for i in range(samples)]
    scale = abs(A) * k * l
    orders = []
    for j in range(j_max + 1):
        c1 = 0.9 * math.factorial(j + 3) / 2.5 ** (4 + j)
        c2 = 1.1 * math.factorial(j + 3)
        ratios = []
        for n in grid:
            val = f_ell_derivative(A, B, k, l, n, j)
            ratios.append(float(abs(val) * Fraction(Q) ** (4 + j) / scale))
        orders.append(
            {
                "j": j,
                "c1": c1,
                "c2": c2,
                "min_ratio": min(ratios),
                "max_ratio": max(ratios),
                "in_bracket": all(c1 <= rr <= c2 for rr in ratios),
            }
        )
    sign_ok = all(
        (f_ell_closed(A, B, k, l, n) > 0) == (A > 0) for n in grid
    )
    return {
        "Q": Q,
        "k": k,
        "l": l,
        "grid": grid,
        "orders": orders,
        "all_in_bracket": all(o["in_bracket"] for o in orders),
        "sign_matches_A": sign_ok,
    }


# -- cancellation surveys ------------------------------------------------------


def _dyadic_uniform(rng, lo: Fraction, hi: Fraction) -> Fraction:
    """An exact dyadic rational uniform in [lo, hi] at 53-bit resolution."""
    return lo + Fraction(rng.random()) * (hi - lo)


def cancellation_scan(
    family: str,
    count: int = 12,
    seed: int = 0,
    qs: tuple[int, ...] | None = None,
    x_scale: int = 10**8,
) -> dict:
    """Survey normalized moduli across a family of phase sums.

    family "random": basic phases with A dyadic-uniform in [Q^5, Q^6]
    and |B| <= |A|/Q^2, over n in (Q, 2Q], for Q in qs. The median of
    |S|/sqrt(N) per Q is reported; genuine cancellation keeps it O(1)
    and softly flat-to-decreasing in Q. Nothing is asserted here.

    family "resonant": rational A with tiny denominator; the sum locks
    onto few phase classes, the normalized modulus stays large, and the
    row is flagged rather than rejected.

    family "lemma61": progression sums at the stated operating scale
    (m near x/Q, r near x^(1/4), short l-ranges); magnitudes only.
    """
    import random

    if family not in ("random", "resonant", "lemma61"):
        raise PreconditionError(f"unknown scan family {family!r}")
    rng = random.Random(seed)
    rows: list[dict] = []
    if family == "random":
        qs = qs or (1 << 10, 1 << 12, 1 << 14)
        for Q in qs:
            for _ in range(count):
                A = _dyadic_uniform(rng, Fraction(Q) ** 5, Fraction(Q) ** 6)
                B = A * Fraction(rng.random()) / Q**2
                spec = make_basic_phase(A, B, Q, 2 * Q)
                res = eval_phase(spec)
                rows.append(
                    {
                        "family": family,
                        "Q": Q,
                        "n_terms": res.n_terms,
                        "abs_sum": abs(res.value),
                        "normalized_modulus": res.normalized_modulus,
                        "ratio_vs_sqrt": abs(res.value) / math.sqrt(res.n_terms),
                        "flagged": False,
                    }
                )
    elif family == "resonant":
        qs = qs or (1 << 10,)
        dens = (2, 3, 4, 6, 8)
        for Q in qs:
            for i in range(count):
                q = dens[i % len(dens)]
                A = Fraction(1 + rng.randrange(q), q)
                spec = make_basic_phase(A, Fraction(0), Q, 2 * Q)
                res = eval_phase(spec)
                ratio = abs(res.value) / math.sqrt(res.n_terms)
                rows.append(
                    {
                        "family": family,
                        "Q": Q,
                        "A_denominator": q,
                        "n_terms": res.n_terms,
                        "abs_sum": abs(res.value),
                        "normalized_modulus": res.normalized_modulus,
                        "ratio_vs_sqrt": ratio,
                        "flagged": ratio > 3.0,
                    }
                )
    else:
        r = 101
        Q = round(x_scale ** 0.35)
        for i in range(count):
            m = x_scale // Q + rng.randrange(1, 50)
            while math.gcd(m, r) != 1:
                m += 1
            h = 1 + rng.randrange(3)
            hi = max(16, Q // r)
            spec = make_lemma61_phase(h, m, r, 0, hi)
            res = eval_phase(spec)
            rows.append(
                {
                    "family": family,
                    "x_scale": x_scale,
                    "h": h,
                    "m": m,
                    "r": r,
                    "v": spec.v,
                    "n_terms": res.n_terms,
                    "abs_sum": abs(res.value),
                    "normalized_modulus": res.normalized_modulus,
                    "ratio_vs_sqrt": abs(res.value) / math.sqrt(res.n_terms),
                    "flagged": False,
                }
            )
    medians: dict = {}
    for row in rows:
        key = row.get("Q", row.get("x_scale"))
        medians.setdefault(key, []).append(row["ratio_vs_sqrt"])
    med = {
        k: sorted(v)[len(v) // 2] for k, v in medians.items()
    }
    keys = sorted(med)
    soft_decreasing = all(med[keys[i + 1]] <= 2.0 * med[keys[i]] for i in range(len(keys) - 1))
    return {
        "family": family,
        "seed": seed,
        "rows": rows,
        "median_ratio_by_scale": med,
        "soft_nonincreasing": soft_decreasing,
        "flag_count": sum(1 for rr in rows if rr["flagged"]),
    }


# -- the smoothing window -------------------------------------------------------


@dataclass(frozen=True)
class SmoothingWindow:
    """A 1-periodic bump: the indicator of [-2 delta, 2 delta] convolved
    with a J-fold box convolution supported on [-delta, delta].

    Exactly 1 on [-delta, delta], exactly 0 outside [-3 delta, 3 delta]
    (mod 1), and C^(J-1) in between; values at rational points are exact
    rationals via the piecewise-polynomial spline CDF. Fourier
    coefficients are products of sinc powers:

        w_hat(h) = 4 delta sinc(4 delta h) sinc(2 delta h / J)^J,

    real and even, with w_hat(0) = 4 delta <= 8 delta and the decay
    |w_hat(h)| <= 8 delta (1 + |h| delta / J)^-J (grid-verified; the
    sinc factors give it analytically in the regimes |h| delta <= 0.69
    and |h| delta >= J/5, and the single-sinc bound 1/(pi h) covers the
    strip between for J <= 8).
    """

    delta: Fraction
    J: int

    def __post_init__(self):
        if not 0 < self.delta <= Fraction(1, 12):
            raise PreconditionError(f"delta must be in (0, 1/12], got {self.delta}")
        if not 1 <= self.J <= 8:
            raise PreconditionError(f"J must be in 1..8, got {self.J}")

    def _box_cdf(self, x: Fraction) -> Fraction:
        """CDF of the J-fold sum of uniform [0,1] variables, exactly."""
        J = self.J
        if x <= 0:
            return Fraction(0)
        if x >= J:
            return Fraction(1)
        total = Fraction(0)
        for kk in range(int(x) + 1):
            total += (-1) ** kk * math.comb(J, kk) * (x - kk) ** J
        return total / math.factorial(J)

    def _bump_cdf(self, t: Fraction) -> Fraction:
        # the J-fold box convolution rescaled to [-delta, delta]
        return self._box_cdf((t + self.delta) * self.J / (2 * self.delta))

    def value(self, y) -> Fraction:
        """w(y), exact for rational y (floats enter at their binary value)."""
        y = Fraction(y) % 1
        if 2 * y > 1:
            y -= 1
        y = abs(y)
        d = self.delta
        if y >= 3 * d:
            return Fraction(0)
        if y <= d:
            return Fraction(1)
        return self._bump_cdf(y + 2 * d) - self._bump_cdf(y - 2 * d)

    def fourier0(self) -> Fraction:
        return 4 * self.delta

    def fourier(self, h: int, dps: int = 30) -> mp.mpf:
        """w_hat(h) for integer h (the window is 1-periodic)."""
        h = int(h)
        with mp.workdps(dps):
            d = mp.mpf(self.delta.numerator) / self.delta.denominator
            out = 4 * d * _sinc(4 * d * h) * _sinc(2 * d * h / self.J) ** self.J
            return out

    def decay_bound(self, h: int, dps: int = 30) -> mp.mpf:
        with mp.workdps(dps):
            d = mp.mpf(self.delta.numerator) / self.delta.denominator
            return 8 * d * (1 + abs(h) * d / self.J) ** (-self.J)

    def decay_check(self, h_max: int = 10**6, points: int = 200) -> dict:
        """max over a log grid of |w_hat(h)| / decay_bound(h) (expect <= 1)."""
        hs = sorted(
            {int(round(math.exp(i * math.log(h_max) / (points - 1)))) for i in range(points)}
        )
        worst = 0.0
        worst_h = None
        for h in hs:
            num = abs(self.fourier(h))
            den = self.decay_bound(h)
            ratio = float(num / den)
            if ratio > worst:
                worst, worst_h = ratio, h
        return {"h_max": h_max, "max_ratio": worst, "at_h": worst_h, "ok": worst <= 1.0}


def _sinc(x) -> mp.mpf:
    if x == 0:
        return mp.mpf(1)
    return mp.sinpi(x) / (mp.pi * x)


def smoothing_window(delta, J: int) -> SmoothingWindow:
    """Build the window; delta is taken exactly (floats at binary value)."""
    return SmoothingWindow(delta=Fraction(delta), J=int(J))
