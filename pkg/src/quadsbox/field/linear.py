"""
GF(2)-linear solvers over GF(2^n).

A linearized polynomial L(x) = sum_j c_j x^(2^j) is a GF(2)-linear map on
the n-bit coefficient space. LinearizedOperator keeps an echelon basis of
its image together with matching preimages, so that the full solution set
of L(x) = rhs is a particular solution plus the kernel span.
"""

from __future__ import annotations

import logging
from math import gcd
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from ..errors import PreconditionError
from .field_spec import FieldSpec

logger = logging.getLogger(__name__)


class SolutionSet(BaseModel):
    """Solutions of a linearized equation."""

    count: int = Field(..., ge=0, description="Number of solutions")
    whole_field: bool = Field(
        default=False, description="Every element solves the equation (not enumerated)"
    )
    elements: List[int] = Field(
        default_factory=list, description="Solutions sorted by integer encoding"
    )


class LinearizedOperator:
    """The map x -> sum_j coeffs[j] * x^(2^j) on GF(2^n)."""

    def __init__(self, spec: FieldSpec, coeffs: Dict[int, int]):
        self.spec = spec
        self.coeffs = {j % spec.n: 0 for j in coeffs}
        for j, c in coeffs.items():
            self.coeffs[j % spec.n] ^= spec.check(c)
        self.is_zero = not any(self.coeffs.values())

        # pivot bit -> (image vector, preimage vector)
        self._pivots: Dict[int, Tuple[int, int]] = {}
        self.kernel: List[int] = []
        for i in range(spec.n):
            image = self.evaluate(1 << i)
            preimage = 1 << i
            while image:
                top = image.bit_length() - 1
                pivot = self._pivots.get(top)
                if pivot is None:
                    self._pivots[top] = (image, preimage)
                    break
                image ^= pivot[0]
                preimage ^= pivot[1]
            else:
                self.kernel.append(preimage)
        self.rank = len(self._pivots)

    def evaluate(self, x: int) -> int:
        acc = 0
        for j, c in self.coeffs.items():
            if c:
                acc ^= self.spec.mul(c, self.spec.frob(x, j))
        return acc

    def particular(self, rhs: int) -> Optional[int]:
        """One solution of L(x) = rhs, or None when rhs is outside the image."""
        preimage = 0
        while rhs:
            pivot = self._pivots.get(rhs.bit_length() - 1)
            if pivot is None:
                return None
            rhs ^= pivot[0]
            preimage ^= pivot[1]
        return preimage

    def solve(self, rhs: int) -> SolutionSet:
        """Full solution set of L(x) = rhs."""
        if self.is_zero:
            if rhs == 0:
                return SolutionSet(count=self.spec.q, whole_field=True)
            return SolutionSet(count=0)
        x0 = self.particular(rhs)
        if x0 is None:
            return SolutionSet(count=0)
        solutions = [x0]
        for vector in self.kernel:
            solutions += [s ^ vector for s in solutions]
        solutions.sort()
        return SolutionSet(count=len(solutions), elements=solutions)


def solve_linearized(spec: FieldSpec, coeffs: Dict[int, int], rhs: int) -> SolutionSet:
    """Solve sum_j coeffs[j] x^(2^j) = rhs.

    Args:
        spec: The field
        coeffs: Map from Frobenius power j to coefficient
        rhs: Right-hand side

    Returns:
        The solution set; an all-zero operator with rhs = 0 is flagged as
        whole_field instead of being enumerated
    """
    return LinearizedOperator(spec, coeffs).solve(spec.check(rhs))


# Artin-Schreier operators x^(2^k) + x, one per (field, k)
_as_operators: Dict[Tuple[int, int, int], LinearizedOperator] = {}


def _artin_schreier_operator(spec: FieldSpec, k: int) -> LinearizedOperator:
    key = (spec.n, spec.modulus, k % spec.n)
    operator = _as_operators.get(key)
    if operator is None:
        operator = LinearizedOperator(spec, {k % spec.n: 1, 0: 1})
        _as_operators[key] = operator
    return operator


def solve_artin_schreier(spec: FieldSpec, a: int, k: Optional[int] = None) -> List[int]:
    """All x with x^(2^k) + x = a, sorted ascending.

    The set is empty exactly when abs_trace(a) = 1, otherwise it is
    {x0, x0 + 1}.

    Raises:
        PreconditionError: If gcd(k, n) != 1
    """
    if k is None:
        k = spec.k_reduced
    if gcd(k, spec.n) != 1:
        raise PreconditionError(f"Artin-Schreier solve needs gcd(k, n) = 1, got k={k}, n={spec.n}")
    return _artin_schreier_operator(spec, k).solve(spec.check(a)).elements


def solve_quadratic(spec: FieldSpec, a: int, b: int) -> List[int]:
    """All x with x^2 + a x + b = 0, sorted ascending."""
    if a == 0:
        return [spec.sqrt(b)]
    ratio = spec.div(b, spec.mul(a, a))
    if spec.abs_trace(ratio):
        return []
    return solve_linearized(spec, {1: 1, 0: a}, b).elements
