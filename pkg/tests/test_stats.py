"""Wilcoxon signed-rank test against brute-force enumeration."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hgrec.stats import EXACT_CUTOFF, wilcoxon_signed_rank


def brute_force_tails(diffs):
    """Enumerate all 2^n sign assignments of |diffs| midranks.

    Returns (P[W+ >= obs], P[W+ <= obs]) for the observed positive-rank sum.
    """
    diffs = np.asarray([d for d in diffs if d != 0.0], dtype=np.float64)
    n = len(diffs)
    magnitudes = np.abs(diffs)
    order = np.argsort(magnitudes, kind="stable")
    ranks = np.empty(n)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and magnitudes[order[j + 1]] == magnitudes[order[i]]:
            j += 1
        ranks[order[i: j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    observed = ranks[diffs > 0].sum()
    greater = less = 0
    for signs in itertools.product((0, 1), repeat=n):
        w_plus = sum(r for s, r in zip(signs, ranks) if s)
        # float sums of midranks are exact in binary (halves of integers)
        if w_plus >= observed:
            greater += 1
        if w_plus <= observed:
            less += 1
    return greater / 2**n, less / 2**n


class TestKnownValues:
    def test_identical_samples_h0(self):
        result = wilcoxon_signed_rank([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert result.n == 0
        assert result.p_two_sided == 1.0
        assert result.verdict == "H0"
        assert result.method == "degenerate"

    def test_strict_domination_ten_pairs(self):
        x = list(range(1, 11))
        y = [v - 1.0 for v in x]
        result = wilcoxon_signed_rank(x, y)
        assert result.p_greater == pytest.approx(1 / 2**10, abs=1e-15)
        assert result.verdict == "H1a"

    def test_statistic_is_min_rank_sum(self):
        # differences 1, -2, 3, -4, 5, 6: negative ranks 2 + 4 = 6
        x = [1.0, 0.0, 3.0, 0.0, 5.0, 6.0]
        y = [0.0, 2.0, 0.0, 4.0, 0.0, 0.0]
        result = wilcoxon_signed_rank(x, y)
        assert result.statistic == 6.0
        assert result.w_plus == 15.0

    def test_inverted_direction_gives_h1b(self):
        x = [0.1 * i for i in range(10)]
        y = [v + 1.0 for v in x]
        assert wilcoxon_signed_rank(x, y).verdict == "H1b"

    def test_balanced_sample_h0(self):
        x = [1.0, -1.0, 2.0, -2.0, 3.0, -3.0]
        result = wilcoxon_signed_rank(x, [0.0] * 6)
        assert result.verdict == "H0"
        assert result.p_two_sided == 1.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            wilcoxon_signed_rank([1.0], [1.0, 2.0])


class TestExactAgainstBruteForce:
    @pytest.mark.parametrize("n", range(1, 13))
    def test_all_sizes_random_samples(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(8):
            x = rng.normal(size=n)
            y = rng.normal(size=n)
            result = wilcoxon_signed_rank(x, y)
            expected_greater, expected_less = brute_force_tails(x - y)
            assert result.p_greater == pytest.approx(expected_greater, abs=1e-12)
            assert result.p_less == pytest.approx(expected_less, abs=1e-12)

    def test_with_tied_magnitudes(self):
        x = [1.0, 1.0, 2.0, 2.0, 3.0, 0.5, 4.0]
        y = [0.0, 2.0, 0.0, 4.0, 0.0, 0.0, 0.0]
        result = wilcoxon_signed_rank(x, y)
        expected_greater, expected_less = brute_force_tails(
            np.asarray(x) - np.asarray(y)
        )
        assert result.p_greater == pytest.approx(expected_greater, abs=1e-12)
        assert result.p_less == pytest.approx(expected_less, abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.integers(min_value=-20, max_value=20), min_size=1, max_size=10
        )
    )
    def test_integer_differences_property(self, diffs):
        x = np.asarray(diffs, dtype=np.float64)
        y = np.zeros(len(diffs))
        result = wilcoxon_signed_rank(x, y)
        if result.n == 0:
            assert result.p_two_sided == 1.0
            return
        expected_greater, expected_less = brute_force_tails(x)
        assert result.p_greater == pytest.approx(expected_greater, abs=1e-12)
        assert result.p_less == pytest.approx(expected_less, abs=1e-12)


class TestApproximation:
    def test_method_switches_at_cutoff(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=EXACT_CUTOFF + 1) + 10.0
        y = rng.normal(size=EXACT_CUTOFF + 1)
        assert wilcoxon_signed_rank(x, y).method == "approx"
        assert wilcoxon_signed_rank(x[:-1], y[:-1]).method == "exact"

    def test_approx_close_to_exact_near_cutoff(self):
        # compare the two methods on the same 25-pair sample
        rng = np.random.default_rng(1)
        x = rng.normal(size=EXACT_CUTOFF)
        y = x + rng.normal(scale=0.8, size=EXACT_CUTOFF)
        exact = wilcoxon_signed_rank(x, y)

        import hgrec.stats as stats_module

        original = stats_module.EXACT_CUTOFF
        try:
            stats_module.EXACT_CUTOFF = 0
            approx = wilcoxon_signed_rank(x, y)
        finally:
            stats_module.EXACT_CUTOFF = original
        assert approx.method == "approx"
        assert approx.p_two_sided == pytest.approx(exact.p_two_sided, abs=0.02)

    def test_obvious_difference_detected_large_n(self):
        rng = np.random.default_rng(2)
        y = rng.normal(size=40)
        x = y + 1.0
        result = wilcoxon_signed_rank(x, y)
        assert result.method == "approx"
        assert result.verdict == "H1a"
        assert result.p_greater < 1e-6
