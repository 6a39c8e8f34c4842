"""
The difference equation f(x + a) + f(x) = b.

After the substitution x -> a x the equation reads

    tau1 xb^(2^k) + tau2 x^(2^k) + tau3 xb + tau4 x + tau5 = 0         (scaled form)

and eliminating xb^(2^k) against its conjugate gives

    v1 x^(2^k) + v2 xb + v3 x + v4 = 0.

When v1 != 0 this is x^(2^k) + tau xb + (1 + tau) x + nu = 0 with
tau = v2/v1 and nu = v4/v1, which has the same solutions as the scaled
form. When v1 = 0 the scaled form splits into an xi-normalized pair of
Artin-Schreier and conjugate equations.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import PreconditionError, TheoryConsistencyError
from ..family import (
    CoefficientTuple,
    GammaVerdict,
    IdentityCheck,
    StructureCache,
    compute_thetas,
    eval_f,
    eval_f_table,
    m_value,
    v_m_value,
)
from ..field import FieldSpec
from .lemma_core import criteria_counts, lemma_core_oracle

logger = logging.getLogger(__name__)


class TauVector(BaseModel):
    """Coefficients of the scaled difference equation."""

    model_config = ConfigDict(frozen=True)

    tau1: int
    tau2: int
    tau3: int
    tau4: int
    tau5: int


class ViVector(BaseModel):
    """Coefficients after eliminating xb^(2^k)."""

    model_config = ConfigDict(frozen=True)

    v1: int
    v2: int
    v3: int
    v4: int


class TauNuParams(BaseModel):
    """Parameters of the normalized equation for one (a, b) with v1 != 0."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    tau: int
    nu: int
    lam: int = Field(..., alias="lambda")
    mu: int
    delta: int = Field(..., description="nu / lambda^(2^k)")


class ReducedSystemReport(BaseModel):
    """Solution counts of the xi-normalized system for v1 = 0."""

    r: int = Field(..., description="ab theta2b / (a theta1), equal to xi or xib")
    epsilon: int = Field(..., description="Right-hand side of yb1 + y1 = epsilon")
    predicted: int = Field(..., description="Count from the subfield and trace test")
    enumerated: int = Field(..., description="Count by enumerating x1")
    observed: int = Field(..., description="Brute-force count of the difference equation")


class V1ZeroReport(BaseModel):
    """Conclusions checked for an a with v1 = 0."""

    a: int
    checks: List[IdentityCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _require_nonzero(a: int) -> None:
    if a == 0:
        raise PreconditionError("The difference direction a must be nonzero")


def compute_tau_vector(spec: FieldSpec, c: CoefficientTuple, a: int, b: int) -> TauVector:
    """tau1..tau5 for direction a and output difference b.

    Raises:
        PreconditionError: If a is zero
        TheoryConsistencyError: If tau1 + tau2 or tau3 + tau4 differs from f(a)
    """
    _require_nonzero(a)
    mul = spec.mul
    ab = spec.conj(a)
    ak, abk = spec.frob_k(a), spec.frob_k(ab)
    c0, c1, c2, c3 = c.values()

    tv = TauVector(
        tau1=mul(mul(c0, ab) ^ mul(c1, a), abk),
        tau2=mul(mul(c2, ab) ^ mul(c3, a), ak),
        tau3=mul(mul(c0, abk) ^ mul(c2, ak), ab),
        tau4=mul(mul(c1, abk) ^ mul(c3, ak), a),
        tau5=eval_f(spec, c, a) ^ spec.check(b),
    )
    fa = tv.tau5 ^ b
    if tv.tau1 ^ tv.tau2 != fa or tv.tau3 ^ tv.tau4 != fa:
        raise TheoryConsistencyError(f"tau sums differ from f(a) for a={a:#x}")
    return tv


def compute_vi(spec: FieldSpec, c: CoefficientTuple, tv: TauVector, a: int, b: int) -> ViVector:
    """v1..v4 from the tau vector, checked against their closed forms.

    Raises:
        TheoryConsistencyError: If a closed form or a linear relation fails
    """
    _require_nonzero(a)
    mul, conj = spec.mul, spec.conj
    t1, t2, t3, t4, t5 = tv.tau1, tv.tau2, tv.tau3, tv.tau4, tv.tau5
    t1b, t2b, t3b, t4b, t5b = (conj(t) for t in (t1, t2, t3, t4, t5))
    vi = ViVector(
        v1=mul(t1, t1b) ^ mul(t2, t2b),
        v2=mul(t1, t4b) ^ mul(t2b, t3),
        v3=mul(t1, t3b) ^ mul(t2b, t4),
        v4=mul(t1, t5b) ^ mul(t2b, t5),
    )

    th = compute_thetas(spec, c)
    ab = conj(a)
    norm = mul(a, ab)
    norm_k = spec.frob_k(norm)
    norm_k1 = mul(norm_k, norm)
    ratio = spec.div(ab, a)
    c0, c1, c2, c3 = c.values()
    closed = {
        "v1": mul(norm_k, m_value(spec, th, a)),
        "v2": mul(norm_k1, th.t4 ^ mul(spec.frob_k(ratio), th.t3) ^ mul(ratio, conj(th.t2))),
        "v3": mul(
            norm_k1,
            th.t1 ^ th.t4 ^ mul(spec.frob_k(ratio), th.t3) ^ mul(spec.inv(ratio), th.t2),
        ),
        "v4": vi.v1
        ^ mul(
            spec.frob_k(ab),
            mul(mul(conj(c2), a) ^ mul(conj(c3), ab), b) ^ mul(mul(c0, ab) ^ mul(c1, a), conj(b)),
        ),
    }
    for name, value in closed.items():
        if getattr(vi, name) != value:
            raise TheoryConsistencyError(f"Closed form of {name} fails for a={a:#x}, b={b:#x}")

    relations = {
        "v1+v2+v3": vi.v1 ^ vi.v2 ^ vi.v3,
        "v4 shift": vi.v4 ^ vi.v1 ^ mul(t1, conj(b)) ^ mul(t2b, b),
        "xb elimination": mul(t1, conj(vi.v3)) ^ mul(t2, vi.v2) ^ mul(t3, vi.v1),
        "x elimination": mul(t1, conj(vi.v2)) ^ mul(t2, vi.v3) ^ mul(t4, vi.v1),
        "constant elimination": mul(t1, conj(vi.v4)) ^ mul(t2, vi.v4) ^ mul(t5, vi.v1),
    }
    for name, value in relations.items():
        if value:
            raise TheoryConsistencyError(f"Relation {name} fails for a={a:#x}, b={b:#x}")
    return vi


def gen_eq_params(
    spec: FieldSpec, cache: StructureCache, c: CoefficientTuple, a: int, b: int
) -> TauNuParams:
    """tau, nu, lambda, mu and Delta for one (a, b).

    Raises:
        PreconditionError: If v1 = 0
        TheoryConsistencyError: If lambda or mu fail their defining equations
    """
    tv = compute_tau_vector(spec, c, a, b)
    vi = compute_vi(spec, c, tv, a, b)
    if vi.v1 == 0:
        raise PreconditionError(f"v1 = 0 for a={a:#x}; use the reduced system instead")

    mul, conj = spec.mul, spec.conj
    th = cache.thetas
    tau = spec.div(vi.v2, vi.v1)
    nu = spec.div(vi.v4, vi.v1)
    lam = spec.div(m_value(spec, th, a), mul(th.t1, mul(a, conj(a))))
    mu = cache.xi ^ spec.div(mul(conj(th.t2), conj(a)), mul(th.t1, a))

    c_val = 1 ^ tau ^ conj(tau)
    if c_val == 0:
        raise TheoryConsistencyError(f"1 + tau + taub vanishes for a={a:#x}")
    if spec.pow(lam, spec.two_k - 1) != c_val:
        raise TheoryConsistencyError(f"lambda^(2^k - 1) != 1 + tau + taub for a={a:#x}")
    if spec.frob_k(mu) ^ mu != mul(tau, lam):
        raise TheoryConsistencyError(f"mu^(2^k) + mu != tau lambda for a={a:#x}")
    if mu ^ conj(mu) != lam:
        raise TheoryConsistencyError(f"mu + mub != lambda for a={a:#x}")

    delta = spec.div(nu, spec.frob_k(lam))
    return TauNuParams(tau=tau, nu=nu, lam=lam, mu=mu, delta=delta)


def diff_eq_count(spec: FieldSpec, c: CoefficientTuple, a: int, b: int) -> Tuple[int, List[int]]:
    """Brute-force solutions of f(x + a) + f(x) = b.

    Raises:
        PreconditionError: If a is zero
    """
    _require_nonzero(a)
    table = eval_f_table(spec, c)
    x = spec.elements()
    solutions = np.flatnonzero((table[x ^ a] ^ table) == spec.check(b)).tolist()
    return len(solutions), solutions


def scaled_equation_solutions(spec: FieldSpec, tv: TauVector) -> List[int]:
    """Brute-force solutions of the scaled form."""
    x = spec.elements()
    xb = spec.vconj(x)
    values = (
        spec.vmul(tv.tau1, spec.vfrob_k(xb))
        ^ spec.vmul(tv.tau2, spec.vfrob_k(x))
        ^ spec.vmul(tv.tau3, xb)
        ^ spec.vmul(tv.tau4, x)
    )
    return np.flatnonzero(values == tv.tau5).tolist()


def normalized_equation_solutions(spec: FieldSpec, params: TauNuParams) -> List[int]:
    """Solutions of x^(2^k) + tau xb + (1 + tau) x + nu = 0 in the scaled variable."""
    return lemma_core_oracle(spec, params.tau, params.nu).solutions


def find_v1_zero_witness(spec: FieldSpec, cache: StructureCache) -> Optional[int]:
    """Smallest nonzero a with M(a) = 0, or None."""
    a = spec.elements()[1:]
    zeros = np.flatnonzero(v_m_value(spec, cache.thetas, a) == 0)
    if zeros.size == 0:
        return None
    return int(a[zeros[0]])


def _reduced_ratio(spec: FieldSpec, cache: StructureCache, a: int) -> int:
    th = cache.thetas
    return spec.div(spec.mul(spec.conj(a), spec.conj(th.t2)), spec.mul(a, th.t1))


def reduced_system_counts(
    spec: FieldSpec, cache: StructureCache, c: CoefficientTuple, a: int, b: int
) -> ReducedSystemReport:
    """Count solutions through x1^(2^k) + x1 + y1 = 0, yb1 + y1 = epsilon.

    Raises:
        PreconditionError: If v1 != 0 for this a
    """
    tv = compute_tau_vector(spec, c, a, b)
    if m_value(spec, cache.thetas, a) != 0:
        raise PreconditionError(f"v1 != 0 for a={a:#x}; the reduced system does not apply")
    if 0 in (tv.tau1, tv.tau2, tv.tau3, tv.tau4):
        raise TheoryConsistencyError(f"A tau coefficient vanishes although v1 = 0 (a={a:#x})")

    r = _reduced_ratio(spec, cache, a)
    epsilon = spec.div(spec.mul(spec.frob_k(r), tv.tau5), tv.tau1)
    if not spec.is_subfield(epsilon) or spec.subfield_trace(epsilon):
        predicted = 0
    else:
        predicted = 1 << (spec.m + 1)

    x1 = spec.elements()
    y1 = spec.vfrob_k(x1) ^ x1
    enumerated = int(np.count_nonzero((y1 ^ spec.vconj(y1)) == epsilon))
    observed, _ = diff_eq_count(spec, c, a, b)
    return ReducedSystemReport(
        r=r, epsilon=epsilon, predicted=predicted, enumerated=enumerated, observed=observed
    )


def v1_zero_analysis(
    spec: FieldSpec, cache: StructureCache, c: CoefficientTuple, a: int
) -> V1ZeroReport:
    """Check the structure forced by v1 = 0 at direction a.

    Raises:
        PreconditionError: If v1 != 0 for this a
    """
    _require_nonzero(a)
    if m_value(spec, cache.thetas, a) != 0:
        raise PreconditionError(f"v1 != 0 for a={a:#x}")
    mul, conj = spec.mul, spec.conj
    th, xi = cache.thetas, cache.xi
    tv = compute_tau_vector(spec, c, a, 0)
    vi = compute_vi(spec, c, tv, a, 0)
    r = _reduced_ratio(spec, cache, a)
    norm2 = spec.div(mul(th.t2, conj(th.t2)), mul(th.t1, th.t1))

    checks = [
        IdentityCheck(tag="class_gamma1", passed=cache.verdict == GammaVerdict.GAMMA1),
        IdentityCheck(
            tag="thetas_nonzero", passed=0 not in (th.t1, th.t2, th.t3, th.t4)
        ),
        IdentityCheck(tag="norm_is_xi_quadratic", passed=norm2 == xi ^ mul(xi, xi)),
        IdentityCheck(tag="ratio_is_xi_root", passed=r in (xi, xi ^ 1)),
        IdentityCheck(tag="v2_v3_zero", passed=vi.v2 == 0 and vi.v3 == 0),
        IdentityCheck(tag="f_a_nonzero", passed=eval_f(spec, c, a) != 0),
    ]
    if tv.tau1 != 0 and th.t2 != 0:
        gamma_inv = spec.div(mul(th.t1, a), mul(conj(th.t2), conj(a)))
        tau31 = spec.pow(gamma_inv, spec.two_k - 1)
        tau21 = spec.frob_k(spec.div(mul(th.t2, mul(a, a)), mul(conj(th.t2), mul(conj(a), conj(a)))))
        checks.append(IdentityCheck(tag="tau3_ratio", passed=spec.div(tv.tau3, tv.tau1) == tau31))
        checks.append(IdentityCheck(tag="tau2_ratio", passed=spec.div(tv.tau2, tv.tau1) == tau21))

    report = V1ZeroReport(a=a, checks=checks)
    if not report.passed:
        failed = [check.tag for check in checks if not check.passed]
        logger.error(f"v1 = 0 conclusions fail for {c.encode(spec)} at a={a:#x}: {failed}")
    return report


def predicted_ddt_row(
    spec: FieldSpec, cache: StructureCache, c: CoefficientTuple, a: int
) -> np.ndarray:
    """DDT(a, b) for every b as predicted by the counting criteria.

    Uses the normalized equation when v1 != 0 and the reduced system
    otherwise.

    Raises:
        PreconditionError: If a is zero
    """
    tv = compute_tau_vector(spec, c, a, 0)
    vi = compute_vi(spec, c, tv, a, 0)
    b = spec.elements()
    fa = tv.tau5

    if vi.v1 == 0:
        r = _reduced_ratio(spec, cache, a)
        eps = spec.vmul(spec.div(spec.frob_k(r), tv.tau1), b ^ fa)
        in_sub = spec.vconj(eps) == eps
        trace = spec.vsubfield_trace(np.where(in_sub, eps, 0))
        return np.where(in_sub & (trace == 0), 1 << (spec.m + 1), 0)

    tau = spec.div(vi.v2, vi.v1)
    v1_inv = spec.inv(vi.v1)
    # nu(b) = 1 + (tau1 bb + tau2b b) / v1
    nus = 1 ^ spec.vmul(v1_inv, spec.vmul(tv.tau1, spec.vconj(b)) ^ spec.vmul(spec.conj(tv.tau2), b))
    return criteria_counts(spec, tau, nus)
