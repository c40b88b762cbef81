"""Beta-sieve weights, truncation lemmas, limit functions, scale thresholds."""

import math
from fractions import Fraction

import pytest
from mpmath import mp

import oracles
from alpha4 import sieve
from alpha4.errors import PreconditionError


def test_weights_full_table_small_case():
    # hand-enumerable: sift primes {2, 3, 5, 7}, level 100, z = 10.
    # chains die when the cube condition prod * p^3 < D fails at the
    # constrained positions (odd for the majorant, even for the minorant)
    ws = sieve.beta_sieve_weights(100, 10)
    assert ws.s == 2.0
    assert ws.sift_primes == (2, 3, 5, 7)
    assert dict(sorted(ws.lambda_plus.items())) == {1: 1, 2: -1, 3: -1, 6: 1}
    assert dict(sorted(ws.lambda_minus.items())) == {
        1: 1, 2: -1, 3: -1, 5: -1, 6: 1, 7: -1, 10: 1, 14: 1,
    }


def test_weights_are_signed_by_mobius():
    ws = sieve.beta_sieve_weights(10**4, 100)
    for lam in (ws.lambda_plus, ws.lambda_minus):
        for d, w in lam.items():
            assert w == oracles.mu(d), d


def test_weight_support_sizes_at_reference_levels():
    ws = sieve.beta_sieve_weights(900, 30)
    assert (len(ws.lambda_plus), len(ws.lambda_minus)) == (14, 40)
    ws = sieve.beta_sieve_weights(10**4, 100)
    assert (len(ws.lambda_plus), len(ws.lambda_minus)) == (92, 208)


def test_weights_degenerate_level():
    ws = sieve.beta_sieve_weights(1.5, 10)
    assert ws.lambda_plus == {1: 1}
    assert ws.lambda_minus == {1: 1}


def test_weights_respect_explicit_prime_subset():
    ws = sieve.beta_sieve_weights(100, 10, primes=[3, 7])
    for d in list(ws.lambda_plus) + list(ws.lambda_minus):
        assert d == 1 or all(p in (3, 7) for p in oracles.factor(d))


def test_weights_reject_tiny_z():
    with pytest.raises(PreconditionError):
        sieve.beta_sieve_weights(100, 1.5)


def test_sandwich_holds_and_brackets_the_indicator():
    ws = sieve.beta_sieve_weights(100, 10)
    rep = sieve.verify_sandwich(ws, 3000)
    assert rep["ok"]
    assert rep["upper_violations"] == 0 and rep["lower_violations"] == 0
    assert rep["checked"] == 3000
    assert rep["min_upper_slack"] == 0 and rep["min_lower_slack"] == 0


def test_sandwich_against_direct_sums():
    # recompute sum_{d | (n, P(z))} lambda_d for a strip of n by brute
    # force and compare with the sifted indicator directly
    ws = sieve.beta_sieve_weights(100, 10)
    for n in range(1, 400):
        up = sum(w for d, w in ws.lambda_plus.items() if n % d == 0)
        low = sum(w for d, w in ws.lambda_minus.items() if n % d == 0)
        sifted = 1 if all(n % p for p in (2, 3, 5, 7)) else 0
        assert low <= sifted <= up, n


def test_fundamental_lemma_even_and_odd():
    even = sieve.FundamentalLemmaTruncation(z=10, R=1, parity="even")
    odd = sieve.FundamentalLemmaTruncation(z=10, R=1, parity="odd")
    assert even.omega_cap == 2 and odd.omega_cap == 3
    rep_e = sieve.fundamental_lemma_check(even, 3000)
    rep_o = sieve.fundamental_lemma_check(odd, 3000)
    assert rep_e["ok"] and rep_o["ok"]
    assert rep_e["violations"] == 0 and rep_o["violations"] == 0
    assert rep_e["min_slack"] >= 0  # even truncation majorizes
    assert rep_o["max_slack"] <= 0 or rep_o["min_slack"] <= 0  # odd minorizes


def test_fundamental_lemma_against_direct_moebius_sum():
    t = sieve.FundamentalLemmaTruncation(z=10, R=1, parity="even")
    cap = t.omega_cap
    for n in range(1, 500):
        total = 0
        for d in oracles.divisors(n):
            f = oracles.factor(d)
            if any(p > 10 for p in f) or any(e > 1 for e in f.values()):
                continue
            if len(f) <= cap:
                total += oracles.mu(d)
        sifted = 1 if all(n % p for p in (2, 3, 5, 7)) else 0
        assert total >= sifted, n


def test_fundamental_lemma_rejects_bad_inputs():
    with pytest.raises(PreconditionError):
        sieve.FundamentalLemmaTruncation(z=10, R=0, parity="even")
    with pytest.raises(PreconditionError):
        sieve.FundamentalLemmaTruncation(z=10, R=1, parity="both")


def test_vector_check_accepts_and_orders():
    assert sieve.vector_sieve_check(1, 2, 3, 1, 2, 3)
    # negative lower bounds are fine
    assert sieve.vector_sieve_check(-5, 2, 3, -1, 1, 4)
    assert sieve.vector_sieve_check(
        Fraction(1, 3), Fraction(1, 2), Fraction(2, 3),
        Fraction(1, 5), Fraction(1, 4), Fraction(1, 3),
    )


def test_vector_check_rejects_disorder():
    with pytest.raises(PreconditionError, match="ordered"):
        sieve.vector_sieve_check(3, 2, 1, 1, 2, 3)
    with pytest.raises(PreconditionError, match="nonnegative"):
        sieve.vector_sieve_check(-3, -2, 1, 1, 2, 3)


def test_vector_random_trials_deterministic():
    rep = sieve.vector_sieve_random_trials(count=20000, seed=5)
    assert rep["ok"]
    assert rep["violations"] == 0
    assert rep["min_slack"] >= 0
    again = sieve.vector_sieve_random_trials(count=20000, seed=5)
    assert again == rep


def test_limit_function_values():
    with mp.workdps(30):
        assert abs(sieve.linear_F(2) - 2 * mp.exp(mp.euler) / 2) < mp.mpf("1e-25")
        assert abs(sieve.linear_f(2)) < mp.mpf("1e-25")
        f3 = sieve.linear_f(3)
        ref = (2 * mp.exp(mp.euler) / 3) * mp.log(2)
        assert abs(f3 - ref) < mp.mpf("1e-25")
    assert float(sieve.linear_F(5)) == pytest.approx(1.0017404102339066, abs=1e-13)


def test_limit_functions_converge_and_order():
    prev_F, prev_f = None, None
    for s in (2.0, 2.5, 3.0, 3.5, 4.0, 5.0):
        F, f = sieve.linear_F(s), sieve.linear_f(s)
        assert F > 1 > f >= 0
        if prev_F is not None:
            assert F < prev_F and f > prev_f
        prev_F, prev_f = F, f


def test_limit_function_gap_frozen_values():
    for s, gap in (
        (2.0, "1.78107241799019798523650410307"),
        (2.5, "0.847127757985066095088965878297"),
        (3.0, "0.364351395391471891961413638491"),
        (3.5, "0.132633472630851400913952234739"),
        (4.0, "0.0432875298341460638439229323723"),
    ):
        with mp.workdps(30):
            got = sieve.linear_F(s) - sieve.linear_f(s)
            assert abs(got - mp.mpf(gap)) < mp.mpf("1e-24"), s


def test_limit_functions_domain():
    with pytest.raises(PreconditionError):
        sieve.linear_F(0.5)
    with pytest.raises(PreconditionError):
        sieve.linear_F(6.5)
    with pytest.raises(PreconditionError):
        sieve.linear_f(-0.1)
    assert sieve.linear_f(1.0) == 0  # flat zero segment below 2


def test_mult_factors():
    assert sieve.mult_h(1) == 1
    assert sieve.mult_h(5) == Fraction(4, 3)
    assert sieve.mult_h(15) == Fraction(8, 3)
    assert sieve.mult_j(7, 1.3) == Fraction(3, 2)
    assert sieve.mult_k(7, 1.3) == 2
    assert sieve.mult_j(7, 7.5) == 1  # p <= D0 is skipped
    with pytest.raises(PreconditionError):
        sieve.mult_h(10)  # even factor
    with pytest.raises(PreconditionError):
        sieve.mult_k(3, 1.0)  # survivor in (D0, 4]


def test_scale_params_desk():
    p = sieve.make_scale_params(10**6)
    assert (p.z_small, p.z_quarter_lo, p.z_quarter_hi) == (2, 21, 42)
    assert p.W == 12
    assert p.preset == "desk"
    assert p.degeneracies == ()
    q = sieve.make_scale_params(10**4)
    assert (q.z_small, q.z_quarter_lo, q.z_quarter_hi) == (2, 8, 12)


def test_scale_params_paper_records_degeneracies():
    p = sieve.make_scale_params(10**6, preset="paper")
    assert "z_small >= z_quarter_lo" in p.degeneracies
    assert "z_quarter_hi >= x" in p.degeneracies


def test_scale_params_overrides():
    p = sieve.make_scale_params(10**6, overrides={"z_small": 20, "z_quarter_lo": 25, "z_quarter_hi": 60})
    assert (p.z_small, p.z_quarter_lo, p.z_quarter_hi) == (20, 25, 60)
    with pytest.raises(PreconditionError):
        sieve.make_scale_params(10**6, overrides={"bogus": 1})


def test_scale_params_domain():
    with pytest.raises(PreconditionError):
        sieve.make_scale_params(5000)
    with pytest.raises(PreconditionError):
        sieve.make_scale_params(10**6, epsilon=0.5)


def test_w_localization_at_huge_scale():
    # a scale whose double log reaches 10 pulls the prime 5 into W
    d0, w, in_range = sieve._w_from_d0(10**9570)
    assert w == 60
    assert 4.99 < d0 < 5.01
    assert in_range
    d0, w, _ = sieve._w_from_d0(10**6)
    assert w == 12 and d0 < 2


def test_mertens_window_report():
    rep = sieve.mertens_window_report(10**6, 0.05)
    assert rep["primes_in_window"] == 5
    assert rep["reciprocal_sum"] == pytest.approx(0.22167419236551703, abs=1e-14)
    assert abs(rep["gap"]) < 0.01  # desk-scale window sits near its target
    with pytest.raises(PreconditionError):
        sieve.mertens_window_report(10**6, 0.3)


def test_mertens_sums_over_explicit_window():
    got = sieve.prime_reciprocal_sum(10**3, 10**6)
    brute = sum(1.0 / p for p in sieve.primes_in(1000, 10**6))
    assert got == pytest.approx(brute, abs=1e-12)
    assert got == pytest.approx(0.6892479723925852, abs=1e-12)
    # the double-log difference is the asymptotic target
    target = math.log(math.log(10**6)) - math.log(math.log(10**3))
    assert abs(got - target) < 0.005
    prod = sieve.mertens_product(10**3, 10**6)
    assert prod == pytest.approx(0.5019215452589002, abs=1e-12)
