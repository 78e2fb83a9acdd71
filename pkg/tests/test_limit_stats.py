from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adictk.dyadic_core import UNDETERMINED, DigitWord, MeasureSpec, dyadic_words
from adictk.limit_stats import (
    EmpiricalCDF,
    NormalizationLadder,
    RankRecord,
    monte_carlo_cdf,
    rank,
    takagi,
    truncated_jump_expectation,
    unrank,
)
from adictk.pascal import chain, pascal_map

from oracles import brute_rank, brute_truncated_expectation, rank_table

W = DigitWord.from_string


@pytest.mark.parametrize("word, t", [("1100", 0), ("1010", 1), ("0110", 2), ("0011", 5)])
def test_rank_examples(word, t):
    assert rank(W(word)) == t
    assert brute_rank(W(word).digits) == t


def test_rank_examples_follow_the_chain():
    order = [str(w) for w in chain(W("1100"))]
    assert order == ["1100", "1010", "0110", "1001", "0101", "0011"]


@pytest.mark.parametrize("n", range(1, 10))
def test_chain_extremes(n):
    for m in range(n + 1):
        assert rank(DigitWord.dyadic([1] * (n - m) + [0] * m)) == 0
        assert rank(DigitWord.dyadic([0] * m + [1] * (n - m))) == comb(n, m) - 1


def test_unrank_examples():
    assert unrank(4, 2, 0) == W("1100")
    assert unrank(4, 2, 3) == W("1001")
    with pytest.raises(ValueError):
        unrank(4, 2, 6)
    with pytest.raises(ValueError):
        unrank(4, 5, 0)


@pytest.mark.parametrize("length", range(1, 13))
def test_rank_matches_enumeration(length):
    table = rank_table(length)
    for w in dyadic_words(length):
        t = rank(w)
        assert t == table[w.digits]
        assert unrank(length, length - sum(w.digits), t) == w
        img = pascal_map(w)
        if img is not UNDETERMINED:
            assert rank(img) == t + 1


@pytest.mark.parametrize("n", range(1, 11))
def test_rank_of_unrank(n):
    for m in range(n + 1):
        for t in range(comb(n, m)):
            assert rank(unrank(n, m, t)) == t


@given(st.lists(st.integers(0, 1), min_size=1, max_size=200))
def test_rank_record_bounds(bits):
    rec = RankRecord.from_word(DigitWord.dyadic(bits))
    assert 0 <= rec.t < comb(rec.n, rec.m)
    assert 0 <= rec.u < 1
    assert unrank(rec.n, rec.m, rec.t).digits == tuple(bits)


@given(st.lists(st.integers(0, 20), min_size=1, max_size=50), st.lists(st.integers(-2, 22), max_size=20))
def test_empirical_cdf_monotone(samples, queries):
    cdf = EmpiricalCDF.from_samples(samples)
    qs = sorted(queries)
    vals = [cdf(q) for q in qs]
    assert all(0 <= v <= 1 for v in vals)
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert cdf(max(samples)) == 1
    assert cdf(min(samples) - 1) == 0


@given(st.lists(st.integers(0, 9), min_size=1), st.lists(st.integers(0, 9), min_size=1))
def test_cdf_merge_is_order_independent(a, b):
    ab = EmpiricalCDF.from_samples(a).merge(EmpiricalCDF.from_samples(b))
    ba = EmpiricalCDF.from_samples(b).merge(EmpiricalCDF.from_samples(a))
    assert ab == ba == EmpiricalCDF.from_samples(a + b)


def test_quantile():
    cdf = EmpiricalCDF.from_samples([1, 2, 2, 3])
    assert cdf.quantile(Fraction(1, 4)) == 1
    assert cdf.quantile(Fraction(1, 2)) == 2
    assert cdf.quantile(1) == 3


def test_monte_carlo_reproducible():
    a = monte_carlo_cdf(MeasureSpec.haar(), [4, 9], 500, seed=11)
    b = monte_carlo_cdf(MeasureSpec.haar(), [4, 9], 500, seed=11)
    assert a.summary() == b.summary()
    assert a.samples[9].records == b.samples[9].records
    # each length has its own stream
    c = monte_carlo_cdf(MeasureSpec.haar(), [9], 500, seed=11)
    assert c.samples[9].records == a.samples[9].records


def test_monte_carlo_rejects_bad_input():
    with pytest.raises(ValueError):
        monte_carlo_cdf(MeasureSpec.haar(), [4], 0)
    with pytest.raises(ValueError):
        monte_carlo_cdf(MeasureSpec.haar(), [0], 10)


def test_monte_carlo_values_in_unit_interval():
    res = monte_carlo_cdf(MeasureSpec.bernoulli(Fraction(1, 3)), [6, 15], 300, seed=2)
    for s in res.samples.values():
        assert all(0 <= u < 1 for u in s.normalized)
        assert sum(c.total for c in s.by_m.values()) == 300
    summary = res.summary()
    assert summary["normalization_is_default"] is True


def test_custom_normalization():
    norm = NormalizationLadder.from_expressions("C(n,m)/2", "sqrt(n)")
    assert norm.apply(4, 2, 3) == Fraction(0)
    assert abs(float(norm.apply(9, 0, 3)) - (3 - 0.5) / 3) < 1e-12
    assert not norm.is_default
    res = monte_carlo_cdf(MeasureSpec.haar(), [5], 50, norm=norm, seed=1)
    assert res.summary()["normalization_is_default"] is False


def test_degenerate_scale_rejected():
    norm = NormalizationLadder.from_expressions("0", "n-4")
    with pytest.raises(ValueError):
        norm.apply(4, 2, 1)


@pytest.mark.parametrize(
    "t, terms, expected",
    [
        (Fraction(0), 5, Fraction(0)),
        (Fraction(1, 4), 3, Fraction(1, 2)),
        (Fraction(1, 4), 10, Fraction(1, 2)),
        (Fraction(1, 2), 2, Fraction(1, 2)),
        (Fraction(1, 2), 12, Fraction(1, 2)),
        (Fraction(1), 4, Fraction(0)),
    ],
)
def test_takagi_examples(t, terms, expected):
    assert takagi(t, terms)[0] == expected


def test_takagi_rejects_out_of_range():
    with pytest.raises(ValueError):
        takagi(Fraction(3, 2), 4)


@given(st.fractions(min_value=0, max_value=1, max_denominator=10**6), st.integers(1, 40))
def test_takagi_partial_sums(t, terms):
    value, bound = takagi(t, terms)
    assert bound == Fraction(2, 2**terms)
    nxt, _ = takagi(t, terms + 1)
    assert nxt >= value
    fine, _ = takagi(t, terms + 10)
    assert 0 <= fine - value <= bound


def test_takagi_one_third():
    # 2^j/3 is always 1/3 from an integer, so the sum is 2/3
    value, bound = takagi(Fraction(1, 3), 30)
    assert abs(value - Fraction(2, 3)) <= bound


def test_expectation_small_windows():
    assert truncated_jump_expectation(2) == Fraction(1, 4)
    with pytest.raises(ValueError):
        truncated_jump_expectation(1)


@pytest.mark.parametrize("length", range(2, 15))
def test_expectation_matches_enumeration(length):
    assert truncated_jump_expectation(length) == brute_truncated_expectation(length)


def test_expectation_closed_form():
    for L in range(2, 41):
        tail = sum(Fraction(s + 1, 2**s) for s in range(2, L + 1))
        assert truncated_jump_expectation(L) == (L - 1) - tail


def test_expectation_strictly_increasing_and_unbounded():
    values = [truncated_jump_expectation(L) for L in range(2, 61)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[-1] > 55


def test_expectation_early_values():
    # the linear lower bound L/2 only holds from L = 6 on
    assert truncated_jump_expectation(4) == Fraction(23, 16)
    assert truncated_jump_expectation(5) == Fraction(9, 4)
    assert truncated_jump_expectation(6) == Fraction(201, 64)
    assert all(truncated_jump_expectation(L) >= Fraction(L, 2) for L in range(6, 41))
