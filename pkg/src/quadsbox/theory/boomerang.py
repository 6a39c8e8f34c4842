"""
Boomerang counts of Gamma0 members through the orbit Z_a.

For a, b != 0 the pairs (x, y) counted by S(a, b) have x + y = z in Z_a,
and for each z the equation f(x) + f(x + z) = b has 4 solutions iff

    D_z = Tr(nu_z / lambda_z^(2^k)) = 0  and  T_z = Tr(mu_z^(2^k) nub_z / lambda_z^(2^k)) = 0.

D_z also equals Tr(theta1^(2^k) bb f(z) / M(a)^(2^k+1)); the three D_z sum
to zero, and when all of them vanish every T_z equals 1.
"""

from __future__ import annotations

import logging
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import PreconditionError
from ..family import CoefficientTuple, GammaVerdict, StructureCache, eval_f, m_value, orbit
from ..field import FieldSpec

logger = logging.getLogger(__name__)


class TzReport(BaseModel):
    """Trace checks over every b for one direction a."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    a: int
    orbit: List[int]
    failures: List[str] = Field(default_factory=list)
    predicted_row: np.ndarray = Field(..., exclude=True, description="Predicted S(a, b) per b")

    @property
    def passed(self) -> bool:
        return not self.failures


def tz_check(spec: FieldSpec, cache: StructureCache, c: CoefficientTuple, a: int) -> TzReport:
    """Evaluate D_z and T_z for every b and predict the LQSL row of a.

    Raises:
        PreconditionError: If the tuple is not Gamma0 or a is zero
    """
    if cache.verdict != GammaVerdict.GAMMA0:
        raise PreconditionError("The orbit trace argument applies to Gamma0 members only")
    zs = orbit(spec, cache, a)
    mul, conj, k_pow = spec.mul, spec.conj, spec.frob_k
    th = cache.thetas
    b = spec.elements()
    bb = spec.vconj(b)
    m_a = m_value(spec, th, a)
    scale = spec.div(k_pow(th.t1), spec.pow(m_a, spec.two_k + 1))

    failures: List[str] = []
    d_all = []
    t_all = []
    for z in zs:
        zb = conj(z)
        m_z = m_value(spec, th, z)
        if m_z == 0:
            failures.append(f"M vanishes at z={z:#x}")
            continue
        lam = spec.div(m_z, mul(th.t1, mul(z, zb)))
        mu = cache.xi ^ spec.div(mul(conj(th.t2), zb), mul(th.t1, z))
        zk, zbk = k_pow(z), k_pow(zb)
        c0, c1, c2, c3 = c.values()
        big_a = mul(c0, mul(zbk, zb)) ^ mul(c1, mul(zbk, z))
        big_b = mul(c2, mul(zb, zk)) ^ mul(c3, mul(zk, z))
        denom_inv = spec.inv(mul(k_pow(mul(z, zb)), m_z))
        nu = 1 ^ spec.vmul(denom_inv, spec.vmul(conj(big_b), b) ^ spec.vmul(big_a, bb))

        lam_k_inv = spec.inv(k_pow(lam))
        d = spec.vtrace(spec.vmul(lam_k_inv, nu))
        d_alt = spec.vtrace(spec.vmul(mul(scale, eval_f(spec, c, z)), bb))
        if not np.array_equal(d, d_alt):
            failures.append(f"D_z closed form fails at z={z:#x}")
        mu_factor = mul(k_pow(mu), lam_k_inv)
        if spec.abs_trace(mu_factor) != 1:
            failures.append(f"Tr(mu^(2^k)/lambda^(2^k)) != 1 at z={z:#x}")
        d_all.append(d)
        t_all.append(spec.vtrace(spec.vmul(mu_factor, spec.vconj(nu))))

    predicted = np.zeros(spec.q, dtype=np.int64)
    if len(d_all) == len(zs):
        d_stack = np.stack(d_all)
        t_stack = np.stack(t_all)
        if np.any(np.bitwise_xor.reduce(d_stack, axis=0)):
            failures.append("D_z values do not sum to zero")
        all_zero = np.all(d_stack == 0, axis=0)
        all_zero[0] = False
        if np.any(all_zero & np.any(t_stack == 0, axis=0)):
            failures.append("T_z vanishes where every D_z vanishes")
        predicted = 4 * np.sum((d_stack == 0) & (t_stack == 0), axis=0)
        predicted[0] = spec.q
        if predicted[1:].max(initial=0) > 4:
            failures.append(f"Predicted S(a, b) exceeds 4 for a={a:#x}")

    if failures:
        logger.error(f"T_z check fails for {c.encode(spec)} at a={a:#x}: {failures}")
    return TzReport(a=a, orbit=zs, failures=failures, predicted_row=predicted)
