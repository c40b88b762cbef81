"""The divisor-power series, its tail expansion, and the near-integer statistic."""

from fractions import Fraction

import pytest
from mpmath import mp

import oracles
from alpha4 import series
from alpha4.bigreal import _exact_fraction
from alpha4.errors import PreconditionError

# frozen from an exact-rational run; the leading block is a truncation,
# not a rounding, so the final digit matches the next digit's floor
ALPHA4_34 = "42.30104750373350806686428406253076"


def test_alpha4_leading_digits():
    val = series.alpha_k(4, 192)
    assert val.leading_decimal(7) == "42.30104"
    assert val.leading_decimal(34) == ALPHA4_34


def test_alpha4_err_at_target_precision():
    val = series.alpha_k(4, 192)
    assert float(val.err) < 2.0**-192 * 2**10  # small slack for conversions


def test_alpha1_against_exact_partial_sum():
    val = series.alpha_k(1, 64)
    partial = oracles.alpha_partial_exact(1, 120)
    # the dropped tail beyond 120 terms is far below the certificate
    assert abs(_exact_fraction(val.value) - partial) <= _exact_fraction(val.err) + Fraction(
        1, 10**30
    )


def test_alpha_partial_matches_brute_force():
    assert series.alpha_partial(4, 30) == oracles.alpha_partial_exact(4, 30)
    assert series.alpha_partial(1, 1) == Fraction(1)


def test_tail_bound_dominates_true_tail():
    # exact tail from n0 to 80 must sit below the claimed bound
    full = oracles.alpha_partial_exact(4, 80)
    head = oracles.alpha_partial_exact(4, 25)
    assert full - head < series.tail_bound(4, 25)


def test_terms_needed_monotone():
    assert series.terms_needed(4, 64) <= series.terms_needed(4, 192)
    n0 = series.terms_needed(4, 128)
    assert series.tail_bound(4, n0) < Fraction(1, 2**128)


def test_zeta_upper_is_an_upper_bound():
    zu = series.zeta_upper(4)
    pi4_90 = 1.082323233711138  # converged reference
    assert float(zu) >= pi4_90
    assert float(zu) - pi4_90 < 1e-6


def test_tail_expansion_leading_term():
    te = series.tail_expansion(11)
    assert te.terms[0] == Fraction(14642, 11)  # sigma_4(11)/11 with 11^4+1 = 14642
    assert te.terms[1] == Fraction(oracles.sigma_k(12, 4), 11 * 12)
    assert te.terms[2] == Fraction(oracles.sigma_k(13, 4), 11 * 12 * 13)
    assert te.terms[3] == Fraction(oracles.sigma_k(14, 4), 11 * 12 * 13 * 14)
    assert te.remainder_bound < 1


def test_tail_expansion_remainder_majorizes_exact_tail():
    for p in (11, 13, 101):
        te = series.tail_expansion(p)
        exact_tail = series.factorial_tail_exact(p, p + 60) - te.leading_sum()
        assert 0 < exact_tail < te.remainder_bound, p


def test_tail_partial_refines_the_bound():
    p = 13
    te = series.tail_expansion(p)
    mid, rest = series.tail_partial(p, 12)
    exact_tail = series.factorial_tail_exact(p, p + 60) - te.leading_sum()
    assert mid < exact_tail < mid + rest
    assert rest < te.remainder_bound


def test_factorial_tail_exact_matches_direct_sum():
    # (p-1)! sum_{n=p}^{n1} sigma_4(n)/n! via the oracle's factorials
    p, n1 = 7, 20
    fact_p1 = 1
    for i in range(1, p):
        fact_p1 *= i
    total = Fraction(0)
    fact = fact_p1
    for n in range(p, n1 + 1):
        fact *= n
        total += Fraction(oracles.sigma_k(n, 4) * fact_p1, fact)
    assert series.factorial_tail_exact(p, n1) == total


def test_tail_expansion_rejects_small_or_composite():
    with pytest.raises(PreconditionError):
        series.tail_expansion(7)
    with pytest.raises(PreconditionError):
        series.tail_expansion(15)


def test_prop1_statistic_exact_small_prime():
    assert series.prop1_statistic_exact(2) == Fraction(13, 48)


def test_prop1_statistic_matches_oracle():
    for p in (2, 3, 5, 7, 11, 13, 101, 997):
        assert series.prop1_statistic_exact(p) == oracles.stat(p), p


def test_prop1_statistic_with_r():
    assert series.prop1_statistic_with_r_exact(13, 3) == oracles.stat_r(13, 3)
    assert series.prop1_statistic_with_r_exact(13, 5) == oracles.stat_r(13, 5)
    assert series.prop1_statistic_with_r_exact(13, 3) == Fraction(47413, 117936)


def test_prop1_statistic_with_r_rejects_bad_r():
    with pytest.raises(PreconditionError):
        series.prop1_statistic_with_r_exact(13, 4)  # 4 does not divide 15
    with pytest.raises(PreconditionError):
        series.prop1_statistic_with_r_exact(13, 1)


def test_prop1_statistic_rejects_composites():
    with pytest.raises(PreconditionError):
        series.prop1_statistic_exact(9)


def test_prop1_wrapped_value_encloses_exact():
    got = series.prop1_statistic(13)
    truth = oracles.stat(13)
    assert abs(_exact_fraction(got.value) - truth) <= _exact_fraction(got.err)


def test_expansion_residuals_within_bounds():
    rows = series.expansion_residuals(101, j_max=32)
    labels = [row["label"] for row in rows]
    assert "p_term" in labels
    assert "tail_majorant" in labels
    for row in rows:
        if row["bound"] is None:
            # the quartic-drop row is report-only by design
            assert row["label"] == "p2_quartic_drop"
            continue
        assert abs(row["value"]) <= row["bound"], row


def test_expansion_residuals_r_moves_divisor_mass():
    # singling out r subtracts its divisor contribution from the tail row
    base = {row["label"]: row for row in series.expansion_residuals(13)}
    with_r = {row["label"]: row for row in series.expansion_residuals(13, r=3)}
    assert set(base) == set(with_r)
    b, w = base["p2_divisor_tail"], with_r["p2_divisor_tail"]
    assert w["value"] == b["value"] - Fraction(15, 3**4)
    assert abs(w["value"]) <= w["bound"]


def test_multiplicativity_shortcut_for_p_plus_one():
    # p = 13: p + 1 = 2 * 7, so sigma_4(p+1) factors cleanly
    p = 13
    lhs = oracles.sigma_k(p + 1, 4)
    assert lhs == oracles.sigma_k(2, 4) * oracles.sigma_k(7, 4)
    theta = Fraction(lhs, p * (p + 1)) + Fraction(1, 16)
    assert series.prop1_statistic_exact(p) == oracles.nearest_int_distance(theta)
