"""
Solution counts of L(x) = x^(2^k) + tau xb + (tau + 1) x + nu over GF(2^n).

The count is always 0, 2 or 4. With c = 1 + tau + taub (a subfield
element) the criteria are:

  c = 0:   2 solutions iff sum_{i<m} (tau^(2^k)(nu + nub) + nu^(2^k))^(2^(ki)) = nu + nub,
           otherwise 0                                                    (branch 1.i)
  c != 0:  lambda = c^(1/(2^k - 1)), Delta = nu / lambda^(2^k),
           mu the smaller root of mu^(2^k) + mu = tau lambda.
           Tr(Delta) = 1                     -> 0
           mu + mub = lambda + 1             -> 2                         (branch 1.ii)
           mu + mub = lambda and
             Tr(mu^(2^k) nub / lambda^(2^k)) = 0 -> 4, else 0           (branch 2)

The constructive side writes every solution as x = mu t + y where
lambda t = x + xb solves an Artin-Schreier equation inside GF(2^m) and y
solves y^(2^k) + y = nu + mu^(2^k)(Delta + Deltab).
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..errors import TheoryConsistencyError
from ..field import FieldSpec, solve_artin_schreier

logger = logging.getLogger(__name__)


class LemmaBranch(str, Enum):
    """Which counting criterion produced a nonzero count."""

    CONJUGATE_ZERO = "1.i"
    TWO_SOLUTIONS = "1.ii"
    FOUR_SOLUTIONS = "2"
    NONE = "none"


class LemmaCoreVerdict(BaseModel):
    """Count and solution set of L(x) = 0."""

    count: int = Field(..., description="Number of solutions, always 0, 2 or 4")
    branch: LemmaBranch = Field(default=LemmaBranch.NONE)
    solutions: List[int] = Field(default_factory=list, description="Sorted solutions")


class _BranchData(BaseModel):
    lam: int
    mu: int


def base_values(spec: FieldSpec, tau: int, x: Optional[np.ndarray] = None) -> np.ndarray:
    """x^(2^k) + tau xb + (tau + 1) x for every x (or the given x)."""
    if x is None:
        x = spec.elements()
    return spec.vfrob_k(x) ^ spec.vmul(tau, spec.vconj(x)) ^ spec.vmul(tau ^ 1, x)


def evaluate(spec: FieldSpec, tau: int, nu: int, x: int) -> int:
    return spec.frob_k(x) ^ spec.mul(tau, spec.conj(x)) ^ spec.mul(tau ^ 1, x) ^ nu


def _branch_data(spec: FieldSpec, tau: int) -> Optional[_BranchData]:
    """lambda and mu for the c != 0 case, None when c = 0.

    Raises:
        TheoryConsistencyError: If mu does not exist
    """
    c = 1 ^ tau ^ spec.conj(tau)
    if c == 0:
        return None
    lam = spec.pow(c, spec.inverse_exponent)
    roots = solve_artin_schreier(spec, spec.mul(tau, lam))
    if not roots:
        raise TheoryConsistencyError(
            f"mu^(2^k) + mu = tau lambda has no root for tau={tau:#x}, lambda={lam:#x}"
        )
    return _BranchData(lam=lam, mu=roots[0])


def _conjugate_zero_criterion(spec: FieldSpec, tau: int, nu: int) -> bool:
    nn = nu ^ spec.conj(nu)
    term = spec.mul(spec.frob_k(tau), nn) ^ spec.frob_k(nu)
    total = 0
    for i in range(spec.m):
        total ^= spec.frob(term, spec.k_reduced * i)
    return total == nn


def _constructive_solutions(
    spec: FieldSpec, tau: int, nu: int, data: Optional[_BranchData]
) -> List[int]:
    if data is None:
        s = spec.frob(nu ^ spec.conj(nu), spec.n - spec.k_reduced)
        w = nu ^ spec.mul(tau, s)
        return sorted(x for x in solve_artin_schreier(spec, w) if x ^ spec.conj(x) == s)

    lam_k = spec.frob_k(data.lam)
    delta = spec.div(nu, lam_k)
    dd = delta ^ spec.conj(delta)
    ts = [t for t in solve_artin_schreier(spec, dd) if spec.is_subfield(t)]
    if not ts:
        return []
    r = nu ^ spec.mul(spec.frob_k(data.mu), dd)
    ys = solve_artin_schreier(spec, r)
    candidates = {spec.mul(data.mu, t) ^ y for t in ts for y in ys}
    return sorted(x for x in candidates if evaluate(spec, tau, nu, x) == 0)


def lemma_core_criteria(spec: FieldSpec, tau: int, nu: int) -> LemmaCoreVerdict:
    """Count solutions by the trace criteria and build them constructively.

    Raises:
        TheoryConsistencyError: If the criteria and the constructive set disagree
    """
    tau, nu = spec.check(tau), spec.check(nu)
    data = _branch_data(spec, tau)

    if data is None:
        count = 2 if _conjugate_zero_criterion(spec, tau, nu) else 0
        branch = LemmaBranch.CONJUGATE_ZERO if count else LemmaBranch.NONE
    else:
        lam_k = spec.frob_k(data.lam)
        delta = spec.div(nu, lam_k)
        mu_sum = data.mu ^ spec.conj(data.mu)
        if spec.abs_trace(delta):
            count, branch = 0, LemmaBranch.NONE
        elif mu_sum == data.lam ^ 1:
            count, branch = 2, LemmaBranch.TWO_SOLUTIONS
        elif mu_sum == data.lam:
            test = spec.div(spec.mul(spec.frob_k(data.mu), spec.conj(nu)), lam_k)
            if spec.abs_trace(test):
                count, branch = 0, LemmaBranch.NONE
            else:
                count, branch = 4, LemmaBranch.FOUR_SOLUTIONS
        else:
            raise TheoryConsistencyError(
                f"mu + mub = {mu_sum:#x} is neither lambda nor lambda + 1 (lambda={data.lam:#x})"
            )

    solutions = _constructive_solutions(spec, tau, nu, data)
    if len(solutions) != count:
        raise TheoryConsistencyError(
            f"Criteria give {count} solutions but construction gives {len(solutions)} "
            f"for tau={tau:#x}, nu={nu:#x}"
        )
    if nu == 0 and branch == LemmaBranch.FOUR_SOLUTIONS and data is not None:
        expected = sorted({0, 1, data.mu, data.mu ^ 1})
        if solutions != expected:
            raise TheoryConsistencyError(f"nu = 0 solutions {solutions} differ from {expected}")
    return LemmaCoreVerdict(count=count, branch=branch, solutions=solutions)


def lemma_core_oracle(spec: FieldSpec, tau: int, nu: int) -> LemmaCoreVerdict:
    """Brute-force enumeration of the solutions of L(x) = 0."""
    values = base_values(spec, spec.check(tau))
    solutions = np.flatnonzero(values == spec.check(nu)).tolist()
    return LemmaCoreVerdict(count=len(solutions), solutions=solutions)


def oracle_counts(spec: FieldSpec, tau: int) -> np.ndarray:
    """N(tau, nu) for every nu, indexed by nu."""
    return np.bincount(base_values(spec, tau), minlength=spec.q)


def criteria_counts(spec: FieldSpec, tau: int, nus: Optional[np.ndarray] = None) -> np.ndarray:
    """Vectorized trace criteria for one tau over many nu.

    Raises:
        TheoryConsistencyError: If mu is missing or mu + mub is out of range
    """
    if nus is None:
        nus = spec.elements()
    nus = np.asarray(nus, dtype=np.int64)
    data = _branch_data(spec, tau)

    if data is None:
        nn = nus ^ spec.vconj(nus)
        term = spec.vmul(spec.frob_k(tau), nn) ^ spec.vfrob_k(nus)
        total = np.zeros_like(nus)
        for i in range(spec.m):
            total ^= spec.vfrob(term, spec.k_reduced * i)
        return np.where(total == nn, 2, 0)

    lam_k_inv = spec.inv(spec.frob_k(data.lam))
    solvable = spec.vtrace(spec.vmul(nus, lam_k_inv)) == 0
    mu_sum = data.mu ^ spec.conj(data.mu)
    if mu_sum == data.lam ^ 1:
        return np.where(solvable, 2, 0)
    if mu_sum != data.lam:
        raise TheoryConsistencyError(f"mu + mub = {mu_sum:#x} is neither lambda nor lambda + 1")
    factor = spec.mul(spec.frob_k(data.mu), lam_k_inv)
    four = spec.vtrace(spec.vmul(factor, spec.vconj(nus))) == 0
    return np.where(solvable & four, 4, 0)


def compare_all(spec: FieldSpec) -> Tuple[int, int, Optional[Tuple[int, int]]]:
    """Criteria against oracle for every (tau, nu).

    Returns:
        (checked, agreeing, first disagreeing (tau, nu) or None)
    """
    checked = agreeing = 0
    first: Optional[Tuple[int, int]] = None
    for tau in range(spec.q):
        predicted = criteria_counts(spec, tau)
        observed = oracle_counts(spec, tau)
        matches = (predicted == observed) & np.isin(observed, (0, 2, 4))
        checked += spec.q
        agreeing += int(matches.sum())
        if first is None and not matches.all():
            first = (tau, int(np.flatnonzero(~matches)[0]))
    return checked, agreeing, first
