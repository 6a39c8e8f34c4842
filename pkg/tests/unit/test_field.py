"""
Tests for the GF(2^n) field core.
"""

import numpy as np
import pytest

from quadsbox.errors import FieldDomainError, PreconditionError
from quadsbox.field import (
    FieldSpec,
    get_field_spec,
    is_irreducible,
    smallest_irreducible,
    validate_parameters,
)


class TestParameters:
    """Test (m, k) validation."""

    def test_valid_pairs(self):
        """Test that odd m with an odd coprime k is accepted."""
        for m, k in [(1, 1), (3, 1), (3, 5), (5, 3), (5, 7)]:
            validate_parameters(m, k)

    def test_even_m_rejected(self):
        """Test that m must be odd."""
        with pytest.raises(FieldDomainError, match="odd"):
            validate_parameters(4, 1)

    def test_even_k_points_to_reduction(self):
        """Test that an even k is rejected with the even-k rewrite hint."""
        with pytest.raises(FieldDomainError, match="even_k_reduce"):
            validate_parameters(3, 2)

    def test_k_not_coprime(self):
        """Test that gcd(m, k) must be 1."""
        with pytest.raises(FieldDomainError, match="gcd"):
            validate_parameters(3, 3)

    def test_field_too_large(self):
        """Test the upper limit on n."""
        with pytest.raises(FieldDomainError, match="exceeds"):
            validate_parameters(13, 1)


class TestModulus:
    """Test modulus selection and field construction."""

    def test_smallest_irreducible_small_degrees(self):
        """Test the known smallest irreducible polynomials."""
        assert smallest_irreducible(2) == 0x7
        assert smallest_irreducible(4) == 0x13
        assert smallest_irreducible(6) == 0x43

    def test_is_irreducible(self):
        """Test irreducibility on a few hand-checked polynomials."""
        assert is_irreducible(0x43)
        assert not is_irreducible(0x41)  # x^6 + 1 = (x^3 + 1)^2
        assert not is_irreducible(0x5)  # x^2 + 1

    def test_gf64_parameters(self):
        """Test the GF(2^6) spec used throughout the tests."""
        spec = get_field_spec(3, 1)
        assert spec.n == 6
        assert spec.q == 64
        assert spec.modulus == 0x43
        assert spec.generator == 2
        assert spec.table_strategy == "log-antilog"

    def test_k_is_reduced_mod_n(self):
        """Test that k is kept as given and reduced mod n for arithmetic."""
        spec = FieldSpec(3, 7)
        assert spec.k == 7
        assert spec.k_reduced == 1
        assert spec.two_k == 2

    def test_cache_returns_same_instance(self):
        """Test the shared field cache."""
        assert get_field_spec(3, 5) is get_field_spec(3, 5)

    def test_describe(self):
        """Test the reported field parameters."""
        info = get_field_spec(3, 1).describe()
        assert info["n"] == 6
        assert info["modulus_hex"] == "43"
        assert info["table_strategy"] == "log-antilog"

    def test_rejects_reducible_modulus(self):
        """Test that an explicit reducible modulus is refused."""
        with pytest.raises(FieldDomainError, match="irreducible"):
            FieldSpec(3, 1, modulus=0x41)


class TestArithmetic:
    """Test scalar and vectorized arithmetic in GF(2^6)."""

    @pytest.fixture
    def spec(self):
        return get_field_spec(3, 1)

    def test_tables_match_reference(self, spec):
        """Test log/antilog multiplication against carry-less multiplication."""
        for x in range(spec.q):
            for y in range(0, spec.q, 7):
                assert spec.mul(x, y) == spec.reference_mul(x, y)

    def test_inverse(self, spec):
        """Test x * x^-1 = 1 for every nonzero x."""
        for x in range(1, spec.q):
            assert spec.mul(x, spec.inv(x)) == 1

    def test_inverse_of_zero(self, spec):
        """Test that zero has no inverse."""
        with pytest.raises(FieldDomainError):
            spec.inv(0)

    def test_check_rejects_out_of_range(self, spec):
        """Test element range checking."""
        with pytest.raises(FieldDomainError):
            spec.check(64)
        with pytest.raises(FieldDomainError):
            spec.check(-1)

    def test_conjugation(self, spec):
        """Test that conjugation is an involution fixing exactly 2^m elements."""
        fixed = [x for x in range(spec.q) if spec.is_subfield(x)]
        assert len(fixed) == 8
        for x in range(spec.q):
            assert spec.conj(spec.conj(x)) == x
            assert spec.conj(x) == spec.pow(x, 8)

    def test_traces(self, spec):
        """Test Tr(x) = Tr_1^m(x + xb) and that traces are bits."""
        for x in range(spec.q):
            t = spec.abs_trace(x)
            assert t in (0, 1)
            assert t == spec.subfield_trace(x ^ spec.conj(x))

    def test_absolute_trace_is_balanced(self, spec):
        """Test that half the elements have trace 1."""
        assert sum(spec.abs_trace(x) for x in range(spec.q)) == spec.q // 2

    def test_subfield_trace_precondition(self, spec):
        """Test that Tr_1^m refuses elements outside the subfield."""
        outside = next(x for x in range(spec.q) if not spec.is_subfield(x))
        with pytest.raises(PreconditionError):
            spec.subfield_trace(outside)

    def test_frobenius(self, spec):
        """Test frob against repeated squaring and sqrt as its inverse."""
        for x in range(spec.q):
            assert spec.frob(x, 1) == spec.mul(x, x)
            assert spec.frob(x, 3) == spec.conj(x)
            assert spec.frob(x, spec.n) == x
            assert spec.mul(spec.sqrt(x), spec.sqrt(x)) == x

    def test_vectorized_matches_scalar(self, spec):
        """Test the v-prefixed methods against their scalar counterparts."""
        xs = spec.elements()
        ys = (xs * 5 + 3) % spec.q
        assert spec.vmul(xs, ys).tolist() == [spec.mul(int(x), int(y)) for x, y in zip(xs, ys)]
        assert spec.vconj(xs).tolist() == [spec.conj(int(x)) for x in xs]
        assert spec.vtrace(xs).tolist() == [spec.abs_trace(int(x)) for x in xs]
        assert spec.vfrob_k(xs).tolist() == [spec.frob_k(int(x)) for x in xs]
        assert spec.vinv(xs)[1:].tolist() == [spec.inv(int(x)) for x in xs[1:]]
        assert spec.vinv(xs)[0] == 0
        assert spec.vpow(xs, 17).tolist() == [spec.pow(int(x), 17) for x in xs]

    def test_vectorized_subfield_trace(self, spec):
        """Test vsubfield_trace on the subfield."""
        sub = np.array([x for x in range(spec.q) if spec.is_subfield(x)])
        assert spec.vsubfield_trace(sub).tolist() == [spec.subfield_trace(int(x)) for x in sub]


class TestCarrylessStrategy:
    """Test the table-free strategy used above n = 20."""

    def test_large_field(self):
        """Test GF(2^22) arithmetic without log tables."""
        spec = get_field_spec(11, 1)
        assert spec.table_strategy == "carryless"
        rng = np.random.Generator(np.random.Philox(3))
        xs = rng.integers(1, spec.q, size=8)
        for x in xs.tolist():
            assert spec.mul(x, spec.inv(x)) == 1
            assert spec.conj(spec.conj(x)) == x
        products = spec.vmul(xs, xs[::-1])
        assert products.tolist() == [spec.mul(int(a), int(b)) for a, b in zip(xs, xs[::-1])]


class TestGaloisOracle:
    """Test the field against the independent galois implementation."""

    @pytest.mark.parametrize("m", [1, 3, 5])
    def test_against_galois(self, m):
        """Test multiplication, inversion and trace against galois."""
        galois = pytest.importorskip("galois")
        spec = get_field_spec(m, 1)
        GF = galois.GF(2**spec.n, irreducible_poly=galois.Poly.Int(spec.modulus))
        assert galois.Poly.Int(spec.modulus).is_irreducible()

        xs = spec.elements()
        ys = (xs * 37 + 11) % spec.q
        expected = np.array(GF(xs) * GF(ys), dtype=np.int64)
        assert np.array_equal(spec.vmul(xs, ys), expected)

        nonzero = xs[1:]
        expected_inv = np.array(np.reciprocal(GF(nonzero)), dtype=np.int64)
        assert np.array_equal(spec.vinv(nonzero), expected_inv)

        expected_trace = np.array(GF(xs).field_trace(), dtype=np.int64)
        assert np.array_equal(spec.vtrace(xs), expected_trace)
