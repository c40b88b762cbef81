"""Midpoint-radius arithmetic: enclosures must stay honest."""

from fractions import Fraction

import pytest
from mpmath import mp

from alpha4.bigreal import BigRealWithError, _exact_fraction


def enclosure(x: BigRealWithError) -> tuple[Fraction, Fraction]:
    v = _exact_fraction(x.value)
    e = _exact_fraction(x.err)
    return v - e, v + e


def test_exact_fraction_roundtrip_is_contained():
    x = BigRealWithError.exact(Fraction(1, 3))
    lo, hi = enclosure(x)
    assert lo <= Fraction(1, 3) <= hi
    assert hi - lo < Fraction(1, 2**45)  # a few ulps at the ambient 53 bits


def test_exact_tracks_working_precision():
    with mp.workprec(200):
        x = BigRealWithError.exact(Fraction(1, 3))
    lo, hi = enclosure(x)
    assert lo <= Fraction(1, 3) <= hi
    assert hi - lo < Fraction(1, 2**190)


def test_exact_int_has_zero_error():
    x = BigRealWithError.exact(42)
    assert x.err == 0
    assert _exact_fraction(x.value) == 42


def test_add_sub_mul_keep_the_truth_inside():
    a = BigRealWithError.exact(Fraction(1, 3))
    b = BigRealWithError.exact(Fraction(1, 7))
    for got, truth in [
        (a + b, Fraction(10, 21)),
        (a - b, Fraction(4, 21)),
        (a * b, Fraction(1, 21)),
        (a + Fraction(1, 2), Fraction(5, 6)),
        (2 - a, Fraction(5, 3)),
        (a.div_exact(5), Fraction(1, 15)),
    ]:
        lo, hi = enclosure(got)
        assert lo <= truth <= hi


def test_widen_only_grows():
    a = BigRealWithError.exact(Fraction(1, 3))
    w = a.widen(Fraction(1, 100))
    assert float(w.err) >= float(a.err) + 0.01 - 1e-15


def test_lower_upper_are_outward():
    a = BigRealWithError(mp.mpf(1), mp.mpf("1e-30"))
    assert float(a.lower()) <= 1 <= float(a.upper())
    assert a.upper() > a.lower()


def test_leading_decimal_truncates_not_rounds():
    # value 1.2999995 +- tiny: the 7-digit truncation is 1.299999,
    # even though rounding would give 1.3
    x = BigRealWithError.exact(Fraction(12999995, 10**7))
    assert x.leading_decimal(7) == "1.299999"


def test_leading_decimal_integer_part_only():
    # digits beyond the cut keep both endpoints inside one digit cell
    x = BigRealWithError.exact(Fraction(4230104321, 10**8))
    assert x.leading_decimal(2) == "42"
    assert x.leading_decimal(7) == "42.30104"


def test_leading_decimal_exact_boundary_is_refused():
    # 42.30104 with a nonzero radius sits on a decimal boundary: the
    # 7th digit is genuinely undecidable and must raise, not guess
    x = BigRealWithError.exact(Fraction(4230104, 10**5))
    assert x.err > 0
    with pytest.raises(ValueError, match="ambiguous"):
        x.leading_decimal(7)


def test_leading_decimal_rejects_ambiguity():
    # radius straddles the 4th digit
    x = BigRealWithError(mp.mpf("1.2345"), mp.mpf("0.001"))
    with pytest.raises(ValueError, match="ambiguous"):
        x.leading_decimal(4)
    assert x.leading_decimal(2) == "1.2"


def test_leading_decimal_rejects_power_of_ten_straddle():
    x = BigRealWithError(mp.mpf("9.9999"), mp.mpf("0.001"))
    with pytest.raises(ValueError, match="straddles"):
        x.leading_decimal(3)


def test_leading_decimal_requires_value_at_least_one():
    x = BigRealWithError.exact(Fraction(1, 2))
    with pytest.raises(ValueError):
        x.leading_decimal(3)


def test_leading_decimal_depth_beyond_certification_raises():
    x = BigRealWithError(mp.mpf("1.5"), mp.mpf("1e-12"))
    with pytest.raises(ValueError, match="ambiguous"):
        x.leading_decimal(30)


def test_wide_mpf_values_are_not_rerounded():
    # a 200-bit value must keep its low bits through the exact accessors
    with mp.workprec(200):
        v = mp.mpf(1) / 3
    x = BigRealWithError(v, mp.mpf(0))
    f = _exact_fraction(x.value)
    assert abs(f - Fraction(1, 3)) < Fraction(1, 2**195)


def test_distance_interval_decided_flag():
    x = BigRealWithError(mp.mpf("2.25"), mp.mpf("0.01"))
    lo, hi, decided = x.distance_interval()
    assert decided
    assert float(lo) <= 0.25 <= float(hi)

    y = BigRealWithError(mp.mpf("2.5"), mp.mpf("0.01"))  # half-integer inside
    lo, hi, decided = y.distance_interval()
    assert not decided
    assert float(hi) == 0.5
