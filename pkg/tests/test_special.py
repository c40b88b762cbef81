"""The special prime set, its class split, counters, and diagnostics."""

from collections import Counter
from fractions import Fraction

import pytest

import oracles
from alpha4 import sieve, special
from alpha4.errors import PreconditionError

X4 = 10**4


def params_at_1e4():
    return sieve.make_scale_params(X4)


def brute_members(x, w, zs, zl, zh):
    """Trial-division enumeration of S: (p, r_or_None) in increasing p."""
    out = []
    for p in range(x // 2 + 1, x + 1):
        if p % w != w - 1 or not oracles.is_prime(p):
            continue
        f2 = oracles.factor(p + 2)
        if any(e > 1 for e in f2.values()):
            continue
        if min(f2) <= zl:
            continue
        mids = [q for q in f2 if zl < q <= zh]
        if len(mids) > 1:
            continue
        half = (p + 3) // 2
        if half > 1 and oracles.least_prime_factor(half) <= zs:
            continue
        out.append((p, mids[0] if mids else None))
    return out


def brute_sigmas(x, w, zs, zl, zh, smooth_exp, delta):
    """Independent recount of the four families over the base candidates."""
    d = Fraction(delta)
    y_smooth = x**smooth_exp
    s1 = s2 = s3 = s4 = 0
    for p in range(x // 2 + 1, x + 1):
        if p % w != w - 1 or not oracles.is_prime(p):
            continue
        half = (p + 3) // 2
        if half > 1 and oracles.least_prime_factor(half) <= zs:
            continue
        f2 = oracles.factor(p + 2)
        lpf2 = min(f2)
        if lpf2 > zh and oracles.stat(p) <= d:
            s1 += 1
        window_rs = [q for q in f2 if zl < q <= zh]
        if not window_rs:
            continue
        rough = lpf2 > zl
        for r in window_rs:
            cof = (p + 2) // r
            cof_ok = cof == 1 or oracles.least_prime_factor(cof) > zh
            if cof_ok and oracles.stat_r(p, r) <= d:
                s2 += 1
            if rough:
                if oracles.max_prime_factor(p + 1) <= y_smooth:
                    s3 += 1
                elif oracles.stat_r(p, r) <= d:
                    s4 += 1
    return s1, s2, s3, s4


def test_enumerate_matches_brute_force_at_1e4(spf_million):
    params = params_at_1e4()
    recs = special.enumerate_S(params, spf_million)
    got = [(rec.p, rec.r) for rec in recs]
    want = brute_members(X4, params.W, params.z_small, params.z_quarter_lo, params.z_quarter_hi)
    assert got == want
    assert len(recs) == 81
    assert Counter(r.klass for r in recs) == {"no_mid_factor": 71, "one_mid_factor": 10}


def test_record_invariants_at_1e4(spf_million):
    params = params_at_1e4()
    for rec in special.enumerate_S(params, spf_million):
        assert rec.p % 12 == 11
        assert X4 // 2 < rec.p <= X4
        assert rec.factor_p1.n == rec.p + 1
        assert rec.factor_p2.n == rec.p + 2
        assert rec.factor_p3.n == (rec.p + 3) // 2
        assert rec.stat_plain == oracles.stat(rec.p)
        if rec.klass == "one_mid_factor":
            assert params.z_quarter_lo < rec.r <= params.z_quarter_hi
            assert (rec.p + 2) % rec.r == 0
            assert rec.stat_r == oracles.stat_r(rec.p, rec.r)
        else:
            assert rec.r is None and rec.stat_r is None


def test_record_constructor_validates():
    params = params_at_1e4()
    rec = special.enumerate_S(params)[0]
    with pytest.raises(PreconditionError):
        special.SpecialPrimeRecord(
            p=rec.p,
            klass="mystery",
            r=None,
            factor_p1=rec.factor_p1,
            factor_p2=rec.factor_p2,
            factor_p3=rec.factor_p3,
            stat_plain=rec.stat_plain,
            stat_r=None,
        )


def test_crt_locates_an_enumerated_pair(spf_million):
    # a one-mid member satisfies the combined congruence p = -1 (W), -2 (r)
    from alpha4 import crt_combine

    params = params_at_1e4()
    rec = next(
        r for r in special.enumerate_S(params, spf_million) if r.klass == "one_mid_factor"
    )
    res, mod = crt_combine([(params.W - 1, params.W), (rec.r - 2, rec.r)])
    assert mod == 12 * rec.r
    assert rec.p % mod == res


def test_sigma_counters_match_brute_force(spf_million):
    params = params_at_1e4()
    recs = special.enumerate_S(params, spf_million)
    for delta in (0.05, 0.5):
        c = special.count_sigmas(params, delta, spf=spf_million, records=recs)
        want = brute_sigmas(
            X4, params.W, params.z_small, params.z_quarter_lo, params.z_quarter_hi,
            params.smooth_exp, delta,
        )
        assert (c.sigma1, c.sigma2, c.sigma3, c.sigma4) == want, delta
    c = special.count_sigmas(params, 0.05, spf=spf_million, records=recs)
    assert (c.sigma1, c.sigma2, c.sigma3, c.sigma4) == (10, 0, 2, 0)
    assert c.S_total == 81


def test_sigma_counters_at_half_cover_the_classes(spf_million):
    # delta = 1/2 makes every statistic condition vacuous, so sigma2
    # counts exactly the one-mid pairs with a rough cofactor
    params = params_at_1e4()
    recs = special.enumerate_S(params, spf_million)
    c = special.count_sigmas(params, 0.5, spf=spf_million, records=recs)
    one_mid = sum(1 for r in recs if r.klass == "one_mid_factor")
    assert c.sigma2 == one_mid == 10
    # sigma1 also admits non-squarefree p+2, so it can only exceed the class
    no_mid = sum(1 for r in recs if r.klass == "no_mid_factor")
    assert c.sigma1 >= no_mid
    assert (c.sigma1, c.sigma3, c.sigma4) == (73, 2, 9)


def test_sigma_counter_consistency_is_enforced():
    params = params_at_1e4()
    with pytest.raises(PreconditionError, match="sigma2"):
        special.SigmaCounters(
            sigma1=1, sigma2=5, sigma3=1, sigma4=1, S_total=10,
            parameters=params, delta=0.05,
        )


def test_witness_gap():
    params = params_at_1e4()
    c = special.SigmaCounters(
        sigma1=10, sigma2=0, sigma3=2, sigma4=0, S_total=81,
        parameters=params, delta=0.05,
    )
    assert c.witness_gap() == 71


def test_partition_check_clean(desk_params, desk_records):
    rep = special.partition_check(desk_records, desk_params)
    assert rep["ok"]
    assert rep["n_records"] == 4110
    assert rep["class_counts"] == {"no_mid_factor": 3513, "one_mid_factor": 597}
    assert rep["first_failure"] is None
    assert all(v == 0 for v in rep["condition_failures"].values())


def test_partition_check_flags_mislabels(desk_params, desk_records):
    import dataclasses

    bad = list(desk_records)
    # relabel a no-mid record as one-mid: class_label and stat_fields fire
    victim = next(r for r in bad if r.klass == "no_mid_factor")
    forged = dataclasses.replace(victim, klass="one_mid_factor", r=23)
    bad[bad.index(victim)] = forged
    rep = special.partition_check(bad, desk_params)
    assert not rep["ok"]
    assert rep["condition_failures"]["class_label"] >= 1
    assert rep["first_failure"]["p"] == victim.p


def test_overrides_config_at_1e6(desk_params, spf_million):
    params = sieve.make_scale_params(
        10**6, overrides={"z_small": 20, "z_quarter_lo": 25, "z_quarter_hi": 60}
    )
    recs = special.enumerate_S(params, spf_million)
    assert len(recs) == 1486
    assert Counter(r.klass for r in recs) == {
        "no_mid_factor": 1237, "one_mid_factor": 249,
    }
    rep = special.partition_check(recs, params)
    assert rep["ok"]
    # spot-check the defining conditions against trial division
    for rec in recs[:: len(recs) // 20]:
        f2 = oracles.factor(rec.p + 2)
        assert all(e == 1 for e in f2.values())
        assert min(f2) > 25
        assert oracles.least_prime_factor((rec.p + 3) // 2) > 20


def test_degenerate_window_forces_prime_p_plus_2(spf_million):
    # window beyond sqrt(x): a surviving p+2 cannot have two factors
    params = sieve.make_scale_params(
        X4, overrides={"z_quarter_lo": 110, "z_quarter_hi": 130}
    )
    recs = special.enumerate_S(params, spf_million)
    assert len(recs) == 39
    assert all(r.klass == "no_mid_factor" for r in recs)
    assert all(len(r.factor_p2.pairs) == 1 for r in recs)
    assert all(oracles.is_prime(r.p + 2) for r in recs)


def test_histogram_mass_and_ks(desk_records):
    rep = special.near_integer_histogram(desk_records, bins=20)
    assert rep["bins"] == 20
    assert len(rep["plain_counts"]) == 20
    assert sum(rep["plain_counts"]) == rep["n_plain"] == len(desk_records)
    n_r = sum(1 for r in desk_records if r.stat_r is not None)
    assert sum(rep["r_counts"]) == rep["n_r"] == n_r
    assert 0 <= rep["ks_plain"] <= 1
    assert 0 <= rep["ks_r"] <= 1
    assert rep["edges"][0] == 0 and rep["edges"][-1] == 0.5


def test_histogram_empty_r_column():
    rep = special.near_integer_histogram([], bins=5)
    assert rep["ks_plain"] is None
    assert rep["n_plain"] == 0


def test_convenient_factor_filter(spf_million):
    assert special.convenient_factor_filter(62, 20, 40, spf_million)  # 62 = 2 * 31
    assert not special.convenient_factor_filter(61, 20, 40, spf_million)  # prime above
    assert not special.convenient_factor_filter(20, 20, 40, spf_million)  # lo exclusive
    assert special.convenient_factor_filter(23, 20, 40, spf_million)
    with pytest.raises(PreconditionError):
        special.convenient_factor_filter(62, 40, 20)


def test_convenient_factor_density_near_heuristic():
    rep = special.convenient_factor_density(3000, 20, 40)
    brute = sum(
        1 for n in range(1, 3001) if any(20 < q <= 40 for q in oracles.factor(n))
    )
    assert rep["density"] == pytest.approx(brute / 3000, abs=1e-12)
    assert rep["rel_gap"] < 0.01
