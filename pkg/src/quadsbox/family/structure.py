"""
Structural constants of a Gamma member: xi, M(a), eta and the orbits Z_a.

xi is the fixed root of xi^(2^k) + xi = theta4/theta1 (the smaller of the
two roots by encoding). M(a) = theta1 a ab + theta2b ab^2 + theta2 a^2 and
eta(a) = xi a + (theta2b/theta1) ab. For Gamma0 members eta has order 3 and
M is constant and nonzero on each orbit {a, eta(a), eta(eta(a))}.
"""

from __future__ import annotations

import logging
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..errors import PreconditionError, TheoryConsistencyError
from ..field import FieldSpec, solve_artin_schreier
from .quadrinomial import (
    CoefficientTuple,
    GammaVerdict,
    ThetaVector,
    classify_thetas,
    compute_thetas,
    eval_f,
    eval_f_table,
)

logger = logging.getLogger(__name__)


class StructureCache(BaseModel):
    """Per-tuple constants shared by every (a, b) analysis."""

    model_config = ConfigDict(frozen=True)

    coefficients: CoefficientTuple
    thetas: ThetaVector
    verdict: GammaVerdict
    xi: int
    s: int  # theta2b / theta1

    def with_other_root(self) -> "StructureCache":
        """The same cache built on the other root xi + 1."""
        return self.model_copy(update={"xi": self.xi ^ 1})


class IdentityCheck(BaseModel):
    """Outcome of one named identity."""

    tag: str
    passed: bool


def compute_xi(spec: FieldSpec, thetas: ThetaVector) -> int:
    """Smaller root of xi^(2^k) + xi = theta4/theta1.

    Raises:
        PreconditionError: If the thetas do not belong to a Gamma member
        TheoryConsistencyError: If the equation is unsolvable or xi + xib != 1
    """
    if not classify_thetas(spec, thetas).is_gamma:
        raise PreconditionError("xi is only defined for Gamma members")
    rhs = spec.div(thetas.t4, thetas.t1)
    roots = solve_artin_schreier(spec, rhs)
    if not roots:
        raise TheoryConsistencyError(f"xi equation has no root for theta4/theta1 = {rhs:#x}")
    xi = roots[0]
    if xi ^ spec.conj(xi) != 1:
        raise TheoryConsistencyError(f"xi = {xi:#x} does not satisfy xi + xib = 1")
    return xi


def build_structure_cache(spec: FieldSpec, c: CoefficientTuple) -> StructureCache:
    """Compute thetas, verdict and xi for a Gamma member.

    Raises:
        PreconditionError: If c is not in Gamma
    """
    thetas = compute_thetas(spec, c)
    gamma = classify_thetas(spec, thetas)
    if not gamma.is_gamma:
        raise PreconditionError(f"{c.encode(spec)} is not a Gamma member ({gamma.reasons})")
    return StructureCache(
        coefficients=c,
        thetas=thetas,
        verdict=gamma.verdict,
        xi=compute_xi(spec, thetas),
        s=spec.div(spec.conj(thetas.t2), thetas.t1),
    )


def m_value(spec: FieldSpec, thetas: ThetaVector, a: int) -> int:
    """theta1 a ab + theta2b ab^2 + theta2 a^2 for any tuple."""
    ab = spec.conj(a)
    return (
        spec.mul(thetas.t1, spec.mul(a, ab))
        ^ spec.mul(spec.conj(thetas.t2), spec.mul(ab, ab))
        ^ spec.mul(thetas.t2, spec.mul(a, a))
    )


def v_m_value(spec: FieldSpec, thetas: ThetaVector, a: np.ndarray) -> np.ndarray:
    ab = spec.vconj(a)
    return (
        spec.vmul(thetas.t1, spec.vmul(a, ab))
        ^ spec.vmul(spec.conj(thetas.t2), spec.vmul(ab, ab))
        ^ spec.vmul(thetas.t2, spec.vmul(a, a))
    )


def big_m(spec: FieldSpec, cache: StructureCache, a: int) -> int:
    """M(a); always conjugation-fixed.

    Raises:
        PreconditionError: If a is zero
    """
    if a == 0:
        raise PreconditionError("M(a) is defined for nonzero a")
    return m_value(spec, cache.thetas, a)


def eta(spec: FieldSpec, cache: StructureCache, a: int) -> int:
    return spec.mul(cache.xi, a) ^ spec.mul(cache.s, spec.conj(a))


def v_eta(spec: FieldSpec, cache: StructureCache, a: np.ndarray) -> np.ndarray:
    return spec.vmul(cache.xi, a) ^ spec.vmul(cache.s, spec.vconj(a))


def orbit(spec: FieldSpec, cache: StructureCache, a: int) -> List[int]:
    """Z_a = {a, eta(a), eta(eta(a))}, sorted.

    Raises:
        PreconditionError: If a is zero
    """
    if a == 0:
        raise PreconditionError("Orbits are taken for nonzero a")
    first = eta(spec, cache, a)
    second = eta(spec, cache, first)
    return sorted({a, first, second})


def identity_suite(spec: FieldSpec, c: CoefficientTuple) -> List[IdentityCheck]:
    """Evaluate the six theta identities and, for Gamma0, the eta identity.

    The eta identity
        eta2(z)^(2^k) (c2 etab(z) + c3 eta(z)) + eta2b(z)^(2^k) (c0 etab(z) + c1 eta(z)) = f(z)
    is checked for every nonzero z.

    Raises:
        PreconditionError: If c is not a Gamma member
    """
    cache = build_structure_cache(spec, c)
    t1, t2, t3, t4 = cache.thetas.t1, cache.thetas.t2, cache.thetas.t3, cache.thetas.t4
    t2b, t3b = spec.conj(t2), spec.conj(t3)
    c0, c1, c2, c3 = c.values()
    mul = spec.mul

    norm2 = spec.div(mul(t2, t2b), mul(t1, t1))
    xi = cache.xi
    checks = [
        IdentityCheck(
            tag="identity_1",
            passed=mul(t2, t2b) ^ mul(t3, t3b) == mul(t4, t1 ^ t4),
        ),
        IdentityCheck(tag="identity_2", passed=mul(c0, t4) ^ mul(c1, t2b) ^ mul(c2, t3) == 0),
        IdentityCheck(
            tag="identity_3", passed=mul(c0, t2) ^ mul(c1, t1 ^ t4) ^ mul(c3, t3) == 0
        ),
        IdentityCheck(
            tag="identity_4", passed=mul(c0, t3b) ^ mul(c2, t1 ^ t4) ^ mul(c3, t2b) == 0
        ),
        IdentityCheck(tag="identity_5", passed=mul(c1, t3b) ^ mul(c2, t2) ^ mul(c3, t4) == 0),
        IdentityCheck(
            tag="identity_6",
            passed=norm2 == spec.conj(xi) ^ mul(xi, xi) ^ spec.subfield_trace(norm2),
        ),
    ]

    if cache.verdict == GammaVerdict.GAMMA0:
        z = spec.elements()[1:]
        e1 = v_eta(spec, cache, z)
        e2 = v_eta(spec, cache, e1)
        e1b = spec.vconj(e1)
        lhs = spec.vmul(
            spec.vfrob_k(e2), spec.vmul(c2, e1b) ^ spec.vmul(c3, e1)
        ) ^ spec.vmul(spec.vfrob_k(spec.vconj(e2)), spec.vmul(c0, e1b) ^ spec.vmul(c1, e1))
        rhs = eval_f_table(spec, c)[z]
        checks.append(IdentityCheck(tag="eta_identity", passed=bool(np.array_equal(lhs, rhs))))

    failed = [check.tag for check in checks if not check.passed]
    if failed:
        logger.warning(f"Identity failures for {c.encode(spec)}: {failed}")
    return checks


def orbit_checks(spec: FieldSpec, cache: StructureCache) -> List[IdentityCheck]:
    """Orbit structure of a Gamma0 member, exhaustive over nonzero a.

    Raises:
        PreconditionError: If the cache is not a Gamma0 member
    """
    if cache.verdict != GammaVerdict.GAMMA0:
        raise PreconditionError("Orbit structure is only claimed for Gamma0 members")
    a = spec.elements()[1:]
    e1 = v_eta(spec, cache, a)
    e2 = v_eta(spec, cache, e1)
    e3 = v_eta(spec, cache, e2)
    m_a = v_m_value(spec, cache.thetas, a)
    table = eval_f_table(spec, cache.coefficients)
    return [
        IdentityCheck(tag="eta_order_three", passed=bool(np.array_equal(e3, a))),
        IdentityCheck(tag="eta_square_sum", passed=bool(np.array_equal(e2, e1 ^ a))),
        IdentityCheck(
            tag="orbit_distinct",
            passed=bool(np.all((e1 != a) & (e2 != a) & (e1 != e2) & (e1 != 0))),
        ),
        IdentityCheck(tag="m_nonzero", passed=bool(np.all(m_a != 0))),
        IdentityCheck(
            tag="m_constant_on_orbit",
            passed=bool(
                np.array_equal(v_m_value(spec, cache.thetas, e1), m_a)
                and np.array_equal(v_m_value(spec, cache.thetas, e2), m_a)
            ),
        ),
        IdentityCheck(
            tag="m_in_subfield", passed=bool(np.array_equal(spec.vconj(m_a), m_a))
        ),
        IdentityCheck(
            tag="orbit_sum_zero",
            passed=bool(np.all((table[a] ^ table[e1] ^ table[e2]) == 0)),
        ),
    ]


def orbit_f_sum(spec: FieldSpec, cache: StructureCache, a: int) -> int:
    """Sum of f over Z_a."""
    acc = 0
    for z in orbit(spec, cache, a):
        acc ^= eval_f(spec, cache.coefficients, z)
    return acc
