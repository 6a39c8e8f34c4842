"""
Tests for the reduction of f(x + a) + f(x) = b and the v1 = 0 branch.
"""

import numpy as np
import pytest

from quadsbox.errors import PreconditionError
from quadsbox.family import (
    CoefficientTuple,
    GammaVerdict,
    build_structure_cache,
    eval_f,
    m_value,
    sample_gamma_members,
)
from quadsbox.field import get_field_spec
from quadsbox.sbox import build_table, ddt_row
from quadsbox.theory import (
    compute_tau_vector,
    compute_vi,
    diff_eq_count,
    normalized_equation_solutions,
    find_v1_zero_witness,
    gen_eq_params,
    predicted_ddt_row,
    reduced_system_counts,
    scaled_equation_solutions,
    v1_zero_analysis,
)


@pytest.fixture
def spec():
    return get_field_spec(3, 1)


@pytest.fixture
def gamma1_members(spec):
    return sample_gamma_members(spec, 3, seed=11, verdict=GammaVerdict.GAMMA1)


def _random_tuples(spec, count, seed):
    rng = np.random.Generator(np.random.Philox(seed))
    tuples = []
    for _ in range(count):
        c0, c1, c2, c3 = rng.integers(0, spec.q, size=4).tolist()
        tuples.append(CoefficientTuple(c0=c0, c1=c1, c2=c2, c3=c3))
    return tuples


class TestTauAndVi:
    """Test the coefficient vectors of the scaled equation."""

    def test_tau_sums_equal_f_a(self, spec):
        """Test tau1 + tau2 = tau3 + tau4 = f(a)."""
        for c in _random_tuples(spec, 10, seed=1):
            for a in (1, 5, 33, 63):
                tv = compute_tau_vector(spec, c, a, 0)
                fa = eval_f(spec, c, a)
                assert tv.tau1 ^ tv.tau2 == fa
                assert tv.tau3 ^ tv.tau4 == fa
                assert tv.tau5 == fa

    def test_tau_rejects_zero_direction(self, spec):
        """Test that a = 0 is a precondition violation."""
        with pytest.raises(PreconditionError):
            compute_tau_vector(spec, CoefficientTuple(c1=1), 0, 3)

    def test_vi_closed_forms_hold_for_any_tuple(self, spec):
        """Test the v1..v4 closed forms on random tuples, directions and b."""
        rng = np.random.Generator(np.random.Philox(2))
        for c in _random_tuples(spec, 20, seed=3):
            a, b = int(rng.integers(1, spec.q)), int(rng.integers(0, spec.q))
            tv = compute_tau_vector(spec, c, a, b)
            vi = compute_vi(spec, c, tv, a, b)
            assert vi.v1 ^ vi.v2 ^ vi.v3 == 0

    def test_scaled_solutions_are_rescaled_difference_solutions(self, spec):
        """Test that x -> a x maps the scaled solutions onto the DDT solutions."""
        for c in _random_tuples(spec, 8, seed=4):
            for a, b in ((1, 0), (7, 9), (40, 3)):
                count, solutions = diff_eq_count(spec, c, a, b)
                scaled = scaled_equation_solutions(spec, compute_tau_vector(spec, c, a, b))
                assert sorted(spec.mul(a, x) for x in scaled) == solutions
                assert count == len(scaled)


class TestNormalizedEquation:
    """Test the v1 != 0 branch on Gamma0 members."""

    def test_normalized_matches_scaled_form(self, spec):
        """Test that the normalized equation has the scaled form's solutions."""
        c = CoefficientTuple(c1=1)
        cache = build_structure_cache(spec, c)
        for a in range(1, spec.q, 5):
            for b in range(0, spec.q, 7):
                params = gen_eq_params(spec, cache, c, a, b)
                tv = compute_tau_vector(spec, c, a, b)
                assert normalized_equation_solutions(spec, params) == scaled_equation_solutions(spec, tv)

    def test_lambda_alias_in_dump(self, spec):
        """Test the external name of lambda."""
        c = CoefficientTuple(c1=1)
        params = gen_eq_params(spec, build_structure_cache(spec, c), c, 3, 0)
        assert "lambda" in params.model_dump(by_alias=True)

    def test_predicted_row_matches_ddt(self, spec):
        """Test every DDT row of sampled Gamma0 members."""
        for c in sample_gamma_members(spec, 3, seed=5, verdict=GammaVerdict.GAMMA0):
            cache = build_structure_cache(spec, c)
            table = build_table(spec, c)
            for a in range(1, spec.q):
                row = predicted_ddt_row(spec, cache, c, a)
                assert np.array_equal(row, ddt_row(table, a))
                assert set(np.unique(row).tolist()) <= {0, 4}

    def test_gamma0_has_no_v1_zero_witness(self, spec):
        """Test that M(a) never vanishes for a Gamma0 member."""
        cache = build_structure_cache(spec, CoefficientTuple(c1=1))
        assert find_v1_zero_witness(spec, cache) is None


class TestV1ZeroBranch:
    """Test the reduced system on Gamma1 members."""

    def test_witness_exists(self, spec, gamma1_members):
        """Test that each Gamma1 member has a direction with M(a) = 0."""
        for c in gamma1_members:
            cache = build_structure_cache(spec, c)
            a = find_v1_zero_witness(spec, cache)
            assert a is not None
            assert m_value(spec, cache.thetas, a) == 0

    def test_gen_eq_params_rejects_v1_zero(self, spec, gamma1_members):
        """Test that the normalized equation is refused at a witness."""
        c = gamma1_members[0]
        cache = build_structure_cache(spec, c)
        with pytest.raises(PreconditionError):
            gen_eq_params(spec, cache, c, find_v1_zero_witness(spec, cache), 0)

    def test_reduced_counts(self, spec, gamma1_members):
        """Test 0 solutions at b = 0 and 2^(m+1) at b = f(a)."""
        full = 1 << (spec.m + 1)
        for c in gamma1_members:
            cache = build_structure_cache(spec, c)
            a = find_v1_zero_witness(spec, cache)
            zero = reduced_system_counts(spec, cache, c, a, 0)
            assert zero.predicted == zero.enumerated == zero.observed == 0
            peak = reduced_system_counts(spec, cache, c, a, eval_f(spec, c, a))
            assert peak.predicted == peak.enumerated == peak.observed == full
            assert peak.r in (cache.xi, cache.xi ^ 1)

    def test_reduced_system_rejects_v1_nonzero(self, spec):
        """Test the precondition on M(a)."""
        c = CoefficientTuple(c1=1)
        with pytest.raises(PreconditionError):
            reduced_system_counts(spec, build_structure_cache(spec, c), c, 1, 0)

    def test_v1_zero_analysis_passes(self, spec, gamma1_members):
        """Test the structural conclusions at the witness."""
        for c in gamma1_members:
            cache = build_structure_cache(spec, c)
            report = v1_zero_analysis(spec, cache, c, find_v1_zero_witness(spec, cache))
            assert report.passed, [check.tag for check in report.checks if not check.passed]

    def test_predicted_row_matches_ddt(self, spec, gamma1_members):
        """Test every DDT row of sampled Gamma1 members, v1 = 0 rows included."""
        for c in gamma1_members:
            cache = build_structure_cache(spec, c)
            table = build_table(spec, c)
            for a in range(1, spec.q):
                assert np.array_equal(predicted_ddt_row(spec, cache, c, a), ddt_row(table, a))
