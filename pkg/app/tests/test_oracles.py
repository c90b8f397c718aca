"""Test closed-form expectations against exhaustive enumeration."""

from __future__ import annotations

import math

import pytest

from app.errors import InvalidParameterError
from app.oracles import (
    STATISTICS,
    brute_force_er_expectation,
    ci2_empirical_limit,
    expected_ci1_two_phase,
    expected_degree_gap_er,
    expected_degree_gap_squared_er,
    expected_di1_er,
    expected_di1_er_half,
    expected_di1_upper_bound,
    expected_di2_er,
    expected_local_clustering_er,
    mean_abs_diff_binomial,
    mean_abs_diff_binomial_asymptotic,
    mean_abs_diff_binomial_half,
    normalized_di2_er,
)
from app.types import BinomialParams, EstimationMethod


class TestDegreeIndexExpectations:
    """Test E[DI_1] and E[DI_2] for G(n, p)."""

    def test_di2_values(self) -> None:
        """Test 6 C(n, 3) p (1 - p) on small instances."""
        assert expected_di2_er(4, 0.5) == 6
        assert expected_di2_er(200, 0.5) == 6 * math.comb(200, 3) * 0.25
        assert expected_di2_er(2, 0.3) == 0

    def test_di2_consistent_with_per_pair_moment(self) -> None:
        """Test C(n, 2) E[(d_i - d_j)^2] equals E[DI_2]."""
        for n in (3, 10, 57):
            per_pair = expected_degree_gap_squared_er(n, 0.3)
            assert math.comb(n, 2) * per_pair == pytest.approx(expected_di2_er(n, 0.3), rel=1e-12)
            assert normalized_di2_er(0.3) * 6 * math.comb(n, 3) == pytest.approx(
                expected_di2_er(n, 0.3), rel=1e-12
            )

    def test_di1_small_values(self) -> None:
        """Test E[DI_1] for n = 2, 3 by hand."""
        assert expected_di1_er(2, 0.4) == 0
        # n = 3: each pair differs by |B1 - B2| with B ~ Bin(1, p)
        assert expected_di1_er(3, 0.5) == pytest.approx(3 * 0.5)

    def test_di1_half_matches_double_sum(self) -> None:
        """Test the p = 1/2 closed form against the general oracle."""
        for n in (3, 10, 41, 150):
            assert expected_di1_er_half(n) == pytest.approx(expected_di1_er(n, 0.5), rel=1e-12)

    @pytest.mark.parametrize("n", [5, 50, 300])
    @pytest.mark.parametrize("p", [0.05, 0.3, 0.5, 0.9])
    def test_di1_below_upper_bound(self, n: int, p: float) -> None:
        """Test E[DI_1] <= C(n, 2) * 2 sqrt((n - 2) p (1 - p))."""
        assert expected_di1_er(n, p) <= expected_di1_upper_bound(n, p)

    def test_di1_asymptotic_ratio(self) -> None:
        """Test exact E[DI_1] at n = 400 is within 5% of the asymptotic form."""
        n, p = 400, 0.5
        asymptotic = math.comb(n, 2) * mean_abs_diff_binomial_asymptotic(
            BinomialParams(trials=n - 2, success_prob=p)
        )

        assert 0.95 <= expected_di1_er(n, p) / asymptotic <= 1.05

    def test_degree_gap_is_per_pair(self) -> None:
        """Test E[DI_1] is C(n, 2) times the per-pair gap."""
        assert expected_di1_er(30, 0.2) == math.comb(30, 2) * expected_degree_gap_er(30, 0.2)


class TestBinomialMeanAbsoluteDifference:
    """Test E|X - Y| for independent binomials."""

    def test_half_small_values(self) -> None:
        """Test m = 0, 1, 2 of the closed form."""
        assert mean_abs_diff_binomial_half(0) == 0.0
        assert mean_abs_diff_binomial_half(1) == 0.5
        assert mean_abs_diff_binomial_half(2) == 0.75

    def test_half_matches_double_sum(self) -> None:
        """Test the closed form against the double sum for every m <= 200."""
        for m in range(201):
            double_sum = mean_abs_diff_binomial(BinomialParams(trials=m, success_prob=0.5))
            assert double_sum == pytest.approx(mean_abs_diff_binomial_half(m), rel=1e-12, abs=0.0)

    def test_half_large_m_is_finite(self) -> None:
        """Test that huge binomial coefficients stay exact until the final division."""
        value = mean_abs_diff_binomial_half(5000)

        assert math.isfinite(value)
        assert value == pytest.approx(
            mean_abs_diff_binomial_asymptotic(BinomialParams(trials=5000, success_prob=0.5)), rel=1e-3
        )

    def test_symmetric_in_p(self) -> None:
        """Test Bin(m, p) and Bin(m, 1 - p) give the same mean gap."""
        for m in (1, 7, 60):
            a = mean_abs_diff_binomial(BinomialParams(trials=m, success_prob=0.2))
            b = mean_abs_diff_binomial(BinomialParams(trials=m, success_prob=0.8))
            assert a == pytest.approx(b, rel=1e-12)

    def test_degenerate(self) -> None:
        """Test zero trials and p in {0, 1}."""
        assert mean_abs_diff_binomial(BinomialParams(trials=0, success_prob=0.3)) == 0.0
        assert mean_abs_diff_binomial(BinomialParams(trials=9, success_prob=0.0)) == 0.0
        assert mean_abs_diff_binomial(BinomialParams(trials=9, success_prob=1.0)) == 0.0

    def test_asymptotic_rejects_degenerate(self) -> None:
        """Test that the approximation needs m >= 1 and 0 < p < 1."""
        with pytest.raises(InvalidParameterError):
            mean_abs_diff_binomial_asymptotic(BinomialParams(trials=0, success_prob=0.5))
        with pytest.raises(InvalidParameterError):
            mean_abs_diff_binomial_asymptotic(BinomialParams(trials=5, success_prob=1.0))


class TestClusteringExpectations:
    """Test E[C(i)], the CI_2 reference level and the two-phase CI_1."""

    def test_local_clustering_small(self) -> None:
        """Test n <= 2 gives 0 and n = 3 gives p^3."""
        assert expected_local_clustering_er(1, 0.5) == 0.0
        assert expected_local_clustering_er(2, 0.5) == 0.0
        assert expected_local_clustering_er(3, 0.4) == pytest.approx(0.4**3)

    def test_local_clustering_tends_to_p(self) -> None:
        """Test E[C(i)] approaches p for large n."""
        assert expected_local_clustering_er(1000, 0.1) == pytest.approx(0.1, rel=1e-9)

    def test_ci2_limit(self) -> None:
        """Test 2 (1 - p)(1 - p^2) / p at p = 0.5 and the p <= 0 error."""
        assert ci2_empirical_limit(0.5) == 1.5
        assert ci2_empirical_limit(1.0) == 0.0
        with pytest.raises(InvalidParameterError):
            ci2_empirical_limit(0.0)

    def test_two_phase(self) -> None:
        """Test (n^2 - n) p (1 - p) at n = 100, p = 0.5."""
        assert expected_ci1_two_phase(100, 0.5) == 2475


class TestBruteForce:
    """Test exhaustive enumeration of G(n, p)."""

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("p", [0.3, 0.5, 0.7])
    def test_matches_closed_forms(self, n: int, p: float) -> None:
        """Test E[DI_2], E[DI_1] and E[C(0)] against enumeration."""
        di2 = brute_force_er_expectation(n, p, STATISTICS["di2"])
        di1 = brute_force_er_expectation(n, p, STATISTICS["di1"])
        c0 = brute_force_er_expectation(n, p, STATISTICS["c0"])

        assert di2.value == pytest.approx(expected_di2_er(n, p), abs=1e-9)
        assert di1.value == pytest.approx(expected_di1_er(n, p), abs=1e-9)
        assert c0.value == pytest.approx(expected_local_clustering_er(n, p), abs=1e-9)
        assert di2.method is EstimationMethod.EXHAUSTIVE_ENUMERATION
        assert abs(di2.total_weight - 1.0) <= 1e-12

    def test_clustering_index_bounds(self) -> None:
        """Test E[CI_2] <= E[CI_1] <= n^2 / 4 on four nodes."""
        ci1 = brute_force_er_expectation(4, 0.5, STATISTICS["ci1"]).value
        ci2 = brute_force_er_expectation(4, 0.5, STATISTICS["ci2"]).value

        assert 0.0 < ci2 <= ci1 <= 4.0

    def test_refuses_large_n(self) -> None:
        """Test that n above the enumeration limit is refused."""
        with pytest.raises(InvalidParameterError):
            brute_force_er_expectation(7, 0.5, STATISTICS["di1"])

    def test_custom_statistic(self) -> None:
        """Test that any graph function can be averaged, e.g. edge count."""
        result = brute_force_er_expectation(4, 0.3, lambda g: float(g.edge_count))

        assert result.value == pytest.approx(6 * 0.3, abs=1e-12)
