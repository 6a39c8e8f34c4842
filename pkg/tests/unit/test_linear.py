"""
Tests for the linearized, quadratic and Artin-Schreier solvers.
"""

import pytest

from quadsbox.errors import PreconditionError
from quadsbox.field import (
    LinearizedOperator,
    get_field_spec,
    solve_artin_schreier,
    solve_linearized,
    solve_quadratic,
)


@pytest.fixture
def spec():
    return get_field_spec(3, 1)


class TestLinearized:
    """Test LinearizedOperator and solve_linearized."""

    def test_solutions_against_brute_force(self, spec):
        """Test x^4 + a x = rhs against enumeration."""
        for a in (1, 2, 9, 33):
            op = LinearizedOperator(spec, {2: 1, 0: a})
            for rhs in range(0, spec.q, 5):
                expected = [x for x in range(spec.q) if op.evaluate(x) == rhs]
                result = op.solve(rhs)
                assert result.elements == expected
                assert result.count == len(expected)

    def test_rank_and_kernel(self, spec):
        """Test that rank plus kernel dimension is n."""
        op = LinearizedOperator(spec, {1: 1, 0: 1})
        assert op.rank + len(op.kernel) == spec.n
        assert len(op.kernel) == 1

    def test_zero_operator(self, spec):
        """Test the all-zero operator."""
        everything = solve_linearized(spec, {0: 0}, 0)
        assert everything.whole_field
        assert everything.count == spec.q
        assert solve_linearized(spec, {3: 0}, 5).count == 0


class TestArtinSchreier:
    """Test x^(2^k) + x = a."""

    @pytest.mark.parametrize("k", [1, 5])
    def test_trace_criterion(self, k):
        """Test that solutions exist iff Tr(a) = 0 and come in pairs x, x + 1."""
        spec = get_field_spec(3, k)
        for a in range(spec.q):
            roots = solve_artin_schreier(spec, a)
            if spec.abs_trace(a):
                assert roots == []
            else:
                assert len(roots) == 2
                assert roots[0] ^ roots[1] == 1
                for r in roots:
                    assert spec.frob_k(r) ^ r == a

    def test_gcd_precondition(self, spec):
        """Test that an exponent sharing a factor with n is refused."""
        with pytest.raises(PreconditionError):
            solve_artin_schreier(spec, 1, k=2)


class TestQuadratic:
    """Test x^2 + a x + b = 0."""

    def test_against_brute_force(self, spec):
        """Test every (a, b) on a grid against enumeration."""
        for a in range(0, spec.q, 3):
            for b in range(0, spec.q, 5):
                expected = [x for x in range(spec.q) if spec.mul(x, x) ^ spec.mul(a, x) ^ b == 0]
                assert solve_quadratic(spec, a, b) == expected
