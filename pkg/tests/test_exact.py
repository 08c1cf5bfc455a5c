from fractions import Fraction

import pytest

from redcalc import exact, series
from redcalc.errors import DomainError


class TestValuation:
    def test_small(self):
        assert [exact.v2(k) for k in range(1, 9)] == [0, 1, 0, 2, 0, 1, 0, 3]

    def test_domain(self):
        with pytest.raises(DomainError):
            exact.v2(0)


class TestRBranchMean:
    def test_zero_branches_deterministic(self):
        for n in range(20):
            assert exact.expected_r_branches(n, 0) == n + 1

    def test_printed_value(self):
        assert exact.expected_r_branches(4, 1) == Fraction(10, 7)

    def test_matches_series_route(self):
        for n in range(13):
            cat = series.catalan(n)
            for r in range(5):
                want = Fraction(series.f1_series(r, max(n, 1))[n], cat)
                assert exact.expected_r_branches(n, r) == want

    def test_vanishes_for_large_r(self):
        assert exact.expected_r_branches(5, 4) == 0


class TestTotalBranchesMean:
    def test_tiny(self):
        assert exact.expected_total_branches(0) == 1
        assert exact.expected_total_branches(1) == 3
        assert exact.expected_total_branches(2) == 4

    def test_matches_series_route(self):
        for n in range(13):
            want = Fraction(
                series.branch_total_series(max(n, 1))[n], series.catalan(n)
            )
            assert exact.expected_total_branches(n) == want


class TestRdeg:
    def test_degree_zero_only_atoms(self):
        assert exact.count_paths_rdeg(1, 0) == 4
        assert exact.count_paths_rdeg(5, 0) == 0

    def test_printed_counts(self):
        assert exact.count_paths_rdeg(4, 1) == 192
        assert exact.count_paths_rdeg(4, 2) == 64
        assert exact.count_paths_rdeg(8, 1) == 7168

    def test_counts_partition(self):
        for n in range(1, 13):
            total = sum(
                exact.count_paths_rdeg(n, r) for r in range(n.bit_length())
            )
            assert total == 4**n

    def test_matches_series_route(self):
        for n in range(1, 11):
            for r in range(4):
                want = series.l_r_equal_series(r, max(n, 1))[n]
                assert exact.count_paths_rdeg(n, r) == want

    def test_prob_normalization(self):
        for n in (3, 7, 10):
            acc = sum(exact.prob_rdeg(n, r) for r in range(n.bit_length()))
            assert acc == 1

    def test_mean_from_distribution(self):
        for n in range(1, 13):
            want = sum(
                r * exact.prob_rdeg(n, r) for r in range(n.bit_length())
            )
            assert exact.expected_rdeg(n) == want


class TestFringe:
    def test_zeroth_fringe_deterministic(self):
        for n in range(1, 20):
            assert exact.expected_fringe(n, 0) == n

    def test_printed_value(self):
        assert exact.expected_fringe(10, 1) == Fraction(11, 4)

    def test_matches_series_route(self):
        for n in range(1, 11):
            for r in range(4):
                want = Fraction(
                    series.fringe_moment_series(r, max(n, 1))[n], 4**n
                )
                assert exact.expected_fringe(n, r) == want

    def test_total_tiny(self):
        # n=1: one fringe of size 1; n=2: 2 + 1 for every path
        assert exact.expected_total_fringe(1) == 1
        assert exact.expected_total_fringe(2) == 3

    def test_total_matches_per_r_sum(self):
        for n in range(1, 13):
            want = sum(
                exact.expected_fringe(n, r) for r in range(n.bit_length())
            )
            assert exact.expected_total_fringe(n) == want


class TestDomains:
    def test_negative_inputs(self):
        with pytest.raises(DomainError):
            exact.expected_r_branches(-1, 0)
        with pytest.raises(DomainError):
            exact.count_paths_rdeg(0, 1)
        with pytest.raises(DomainError):
            exact.expected_fringe(0, 1)
