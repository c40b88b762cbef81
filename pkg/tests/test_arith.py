"""Integer utilities: factorization, divisor sums, tables, CRT, distances."""

import random
from fractions import Fraction

import pytest
from mpmath import mp

import oracles
from alpha4 import arith
from alpha4.bigreal import BigRealWithError
from alpha4.errors import PreconditionError


def test_sigma4_small_values():
    assert arith.sigma_k(1, 4) == 1
    assert arith.sigma_k(2, 4) == 17
    assert arith.sigma_k(6, 4) == 1394  # 1 + 16 + 81 + 1296


def test_sigma_k_matches_brute_force():
    for n in range(1, 400):
        assert arith.sigma_k(n, 4) == oracles.sigma_k(n, 4), n
        assert arith.sigma_k(n, 1) == oracles.sigma_k(n, 1), n


def test_sigma_is_multiplicative_on_coprime_parts():
    # sigma_4(14) factors through the prime powers 2 and 7
    assert arith.sigma_k(14, 4) == arith.sigma_k(2, 4) * arith.sigma_k(7, 4)
    assert arith.sigma_k(14, 4) == 40834


def test_mobius_and_phi():
    assert arith.mobius(12) == 0
    assert arith.euler_phi(12) == 4
    for n in range(1, 300):
        assert arith.mobius(n) == oracles.mu(n), n
        assert arith.euler_phi(n) == oracles.phi(n), n


def test_least_prime_factor():
    assert arith.least_prime_factor(91) == 7
    assert arith.least_prime_factor(2) == 2
    for n in range(2, 500):
        assert arith.least_prime_factor(n) == oracles.least_prime_factor(n), n


def test_is_prime_matches_trial_division():
    for n in range(0, 2000):
        assert arith.is_prime(n) == oracles.is_prime(n), n


def test_is_prime_large_strong_pseudoprime_candidates():
    # Carmichael numbers and near-prime composites
    for n in (561, 1105, 1729, 2465, 2821, 6601, 8911, 10585, 825265):
        assert not arith.is_prime(n), n
    assert arith.is_prime(2**31 - 1)
    assert not arith.is_prime((2**31 - 1) * (2**13 - 1))


def test_spf_table_values():
    spf = arith.build_spf_table(100)
    assert spf.least_prime_factor(9) == 3
    assert spf.least_prime_factor(7) == 7
    assert spf.least_prime_factor(91) == 7
    with pytest.raises(PreconditionError):
        spf.least_prime_factor(1)  # table starts at 2
    with pytest.raises(PreconditionError):
        spf.least_prime_factor(101)


def test_spf_table_full_agreement(spf_million):
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randrange(2, 10**6)
        assert spf_million.least_prime_factor(n) == oracles.least_prime_factor(n)


def test_spf_dump_load_roundtrip(tmp_path):
    spf = arith.build_spf_table(5000)
    path = str(tmp_path / "spf.npz")
    spf.dump(path)
    back = arith.SpfTable.load(path)
    assert back.limit == spf.limit
    for n in (2, 3, 4, 91, 4999):
        assert back.least_prime_factor(n) == spf.least_prime_factor(n)


def test_factorize_small_and_against_oracle():
    f = arith.factorize(360)
    assert dict(f.pairs) == {2: 3, 3: 2, 5: 1}
    for n in range(2, 600):
        assert dict(arith.factorize(n).pairs) == oracles.factor(n), n


def test_factorize_semiprime_beyond_trial_division():
    # both factors exceed the 2^16 trial bound, so the cycle splitter runs
    p, q = 1000003, 1000033
    f = arith.factorize(p * q)
    assert dict(f.pairs) == {p: 1, q: 1}


def test_factorize_rejects_uncertifiable_cofactor():
    # beyond the deterministic primality limit the split is refused
    p = 2147483647
    with pytest.raises(PreconditionError, match="certified"):
        arith.factorize(p * p)


def test_factorization_accessors():
    f = arith.factorize(360)
    assert f.sigma(1) == oracles.sigma_k(360, 1)
    assert f.mobius() == 0
    assert f.euler_phi() == oracles.phi(360)
    assert f.omega() == 3
    assert f.tau() == len(oracles.divisors(360))
    assert not f.is_squarefree()
    assert f.least_prime_factor() == 2
    assert f.greatest_prime_factor() == 5
    assert f.divisors() == oracles.divisors(360)


def test_factorize_rejects_nonpositive():
    with pytest.raises(PreconditionError):
        arith.factorize(0)
    with pytest.raises(PreconditionError):
        arith.factorize(-6)


def test_primes_upto_counts():
    ps = list(arith.primes_upto(100))
    assert len(ps) == 25
    assert ps[0] == 2 and ps[-1] == 97
    assert len(arith.primes_upto(10**4)) == 1229


def test_primes_in_half_open_window():
    assert arith.primes_in(10, 20) == [11, 13, 17, 19]
    assert arith.primes_in(10, 11) == [11]  # hi inclusive
    assert arith.primes_in(11, 20) == [13, 17, 19]  # lo exclusive
    assert arith.primes_in(24, 28) == []


def test_primes_in_accepts_float_bounds():
    # fractional bounds floor to the same integer window
    assert arith.primes_in(10.7, 20.3) == arith.primes_in(10, 20)


def test_prime_range_rejects_disorder():
    with pytest.raises(PreconditionError):
        arith.PrimeRange(20, 10)


def test_crt_combine():
    assert arith.crt_combine([(1, 3), (2, 5)]) == (7, 15)
    assert arith.crt_combine([(0, 1)]) == (0, 1)
    r, m = arith.crt_combine([(2, 4), (3, 5), (1, 7)])
    assert m == 140
    assert r % 4 == 2 and r % 5 == 3 and r % 7 == 1


def test_crt_combine_rejects_contradiction():
    with pytest.raises(PreconditionError):
        arith.crt_combine([(0, 2), (1, 4)])


def test_distance_to_nearest_integer_floats():
    assert arith.distance_to_nearest_integer(2.0) == 0.0
    assert arith.distance_to_nearest_integer(2.5) == 0.5
    assert abs(arith.distance_to_nearest_integer(42.30104) - 0.30104) < 1e-12


def test_distance_to_nearest_integer_fraction_is_exact():
    assert arith.distance_to_nearest_integer(Fraction(13, 48)) == Fraction(13, 48)
    assert arith.distance_to_nearest_integer(Fraction(659, 48)) == Fraction(13, 48)
    assert arith.distance_to_nearest_integer(Fraction(-1, 4)) == Fraction(1, 4)


def test_distance_to_nearest_integer_interval():
    x = BigRealWithError.exact(Fraction(659, 48))
    lo, hi, decided = arith.distance_to_nearest_integer(x)
    assert decided
    assert float(lo) <= 13 / 48 <= float(hi)
    assert float(hi) - float(lo) < 1e-10


def test_distance_interval_undecided_near_integer():
    x = BigRealWithError(mp.mpf(3), mp.mpf("0.25"))  # encloses the integer 3
    lo, hi, decided = arith.distance_to_nearest_integer(x)
    assert not decided
    assert float(lo) == 0.0
