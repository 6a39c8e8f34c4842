"""
Tests for the solution counts of x^(2^k) + tau xb + (tau + 1) x + nu = 0.
"""

import numpy as np
import pytest

from quadsbox.field import get_field_spec
from quadsbox.theory import (
    LemmaBranch,
    base_values,
    compare_all,
    criteria_counts,
    lemma_core_criteria,
    lemma_core_oracle,
    oracle_counts,
)


class TestCriteriaAgainstOracle:
    """Test the trace criteria against brute force."""

    @pytest.mark.parametrize("k", [1, 5])
    def test_all_pairs_gf64(self, k):
        """Test every (tau, nu) pair in GF(2^6)."""
        checked, agreeing, first = compare_all(get_field_spec(3, k))
        assert checked == 4096
        assert agreeing == 4096
        assert first is None

    def test_counts_are_0_2_or_4(self):
        """Test the count range directly from the oracle."""
        spec = get_field_spec(3, 1)
        for tau in range(spec.q):
            assert set(np.unique(oracle_counts(spec, tau)).tolist()) <= {0, 2, 4}

    def test_sampled_gf1024(self):
        """Test sampled tau values at n = 10."""
        spec = get_field_spec(5, 3)
        rng = np.random.Generator(np.random.Philox(17))
        for tau in rng.integers(0, spec.q, size=24).tolist():
            assert np.array_equal(criteria_counts(spec, tau), oracle_counts(spec, tau))

    def test_subset_of_nu(self):
        """Test criteria_counts on an explicit nu array."""
        spec = get_field_spec(3, 1)
        nus = np.array([0, 5, 17, 63])
        for tau in (0, 3, 40):
            assert np.array_equal(criteria_counts(spec, tau, nus), criteria_counts(spec, tau)[nus])


class TestConstructiveSolutions:
    """Test the constructive solution sets."""

    def test_solutions_match_oracle(self):
        """Test every (tau, nu) pair in GF(2^6) with k = 1."""
        spec = get_field_spec(3, 1)
        for tau in range(spec.q):
            for nu in range(spec.q):
                verdict = lemma_core_criteria(spec, tau, nu)
                oracle = lemma_core_oracle(spec, tau, nu)
                assert verdict.solutions == oracle.solutions
                assert verdict.count == oracle.count
                assert (verdict.branch == LemmaBranch.NONE) == (verdict.count == 0)

    def test_nu_zero_contains_zero_and_one(self):
        """Test that x = 0 and x = 1 always solve the homogeneous equation."""
        spec = get_field_spec(3, 5)
        for tau in range(spec.q):
            verdict = lemma_core_criteria(spec, tau, 0)
            assert {0, 1} <= set(verdict.solutions)
            assert verdict.count in (2, 4)

    def test_branch_matches_count(self):
        """Test that each branch reports its own count."""
        spec = get_field_spec(3, 1)
        expected = {LemmaBranch.CONJUGATE_ZERO: 2, LemmaBranch.TWO_SOLUTIONS: 2, LemmaBranch.FOUR_SOLUTIONS: 4}
        seen = set()
        for tau in range(spec.q):
            for nu in range(0, spec.q, 3):
                verdict = lemma_core_criteria(spec, tau, nu)
                if verdict.branch != LemmaBranch.NONE:
                    assert verdict.count == expected[verdict.branch]
                    seen.add(verdict.branch)
        assert LemmaBranch.CONJUGATE_ZERO in seen

    def test_base_values_subset(self):
        """Test base_values on explicit x."""
        spec = get_field_spec(3, 1)
        x = np.array([1, 2, 3])
        assert np.array_equal(base_values(spec, 7, x), base_values(spec, 7)[x])
