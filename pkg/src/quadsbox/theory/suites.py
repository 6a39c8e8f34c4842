"""
Named verification suites run by ``quadsbox verify``.

Each suite counts individual checks and keeps the first failing input in
full so a failure can be reproduced from the report alone.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from ..config import (
    FIELD_SUITE_SAMPLE_SIZE,
    LEMMA_CORE_EXHAUSTIVE_MAX_N,
    LEMMA_CORE_SAMPLED_TAUS,
    SUITE_GAMMA_MEMBERS,
    SUITE_SAMPLE_SIZE,
    SUITE_THEOREM_TUPLES,
    TZ_EXHAUSTIVE_MAX_N,
)
from ..errors import QuadSboxError
from ..family import (
    CoefficientTuple,
    GammaVerdict,
    build_structure_cache,
    classify,
    compute_thetas,
    identity_suite,
    m_value,
    orbit_checks,
    sample_gamma_members,
)
from ..field import FieldSpec, get_field_spec, solve_artin_schreier
from .difference import (
    compute_tau_vector,
    compute_vi,
    normalized_equation_solutions,
    gen_eq_params,
    scaled_equation_solutions,
)
from .lemma_core import base_values, criteria_counts, lemma_core_criteria, lemma_core_oracle
from .theorem import BetaMode, verify_theorem

logger = logging.getLogger(__name__)


class SuiteName(str, Enum):
    """Available verification suites."""

    FIELD = "field"
    LEMMA_CORE = "lemma-core"
    IDENTITIES = "identities"
    VI = "vi"
    THEOREM = "theorem"


class SuiteResult(BaseModel):
    """Outcome of one suite run."""

    suite: SuiteName
    m: int
    k: int
    seed: int
    samples: int = Field(..., description="Random inputs drawn")
    gamma_members: int = Field(..., description="Gamma members drawn by the identities and vi suites")
    checked: int = 0
    passed: int = 0
    first_counterexample: Optional[str] = Field(default=None, description="First failing input")

    @property
    def ok(self) -> bool:
        return self.checked == self.passed


class _Tally:
    def __init__(self, result: SuiteResult):
        self.result = result

    def record(
        self, ok: bool, describe: Callable[[], str], count: int = 1, failed: Optional[int] = None
    ) -> None:
        if failed is None:
            failed = 0 if ok else count
        self.result.checked += count
        self.result.passed += count - failed
        if not ok and self.result.first_counterexample is None:
            self.result.first_counterexample = describe()
            logger.warning(f"{self.result.suite.value}: {self.result.first_counterexample}")


def _sample_elements(spec: FieldSpec, rng: np.random.Generator, samples: int) -> List[int]:
    if spec.n <= TZ_EXHAUSTIVE_MAX_N:
        return list(range(spec.q))
    return rng.integers(0, spec.q, size=samples).tolist()


def _random_tuple(spec: FieldSpec, rng: np.random.Generator) -> CoefficientTuple:
    c0, c1, c2, c3 = (int(v) for v in rng.integers(0, spec.q, size=4))
    return CoefficientTuple(c0=c0, c1=c1, c2=c2, c3=c3)


def _field_suite(spec: FieldSpec, rng: np.random.Generator, samples: int, tally: _Tally) -> None:
    xs = _sample_elements(spec, rng, samples)
    ys = rng.integers(0, spec.q, size=len(xs)).tolist()
    zs = rng.integers(0, spec.q, size=len(xs)).tolist()
    mul = spec.mul
    for x, y, z in zip(xs, ys, zs):
        ok = (
            mul(x, y) == spec.reference_mul(x, y)
            and mul(x, y) == mul(y, x)
            and mul(mul(x, y), z) == mul(x, mul(y, z))
            and mul(x, y ^ z) == mul(x, y) ^ mul(x, z)
            and spec.frob(mul(x, y), 1) == mul(spec.frob(x, 1), spec.frob(y, 1))
        )
        tally.record(ok, lambda: f"ring axioms fail for x={x:#x}, y={y:#x}, z={z:#x}")

        xb = spec.conj(x)
        ok = (
            spec.conj(xb) == x
            and spec.is_subfield(x ^ xb)
            and spec.abs_trace(x) == spec.subfield_trace(x ^ xb)
            and (x == 0 or mul(x, spec.inv(x)) == 1)
        )
        tally.record(ok, lambda: f"conjugation, trace or inverse fail for x={x:#x}")

        roots = solve_artin_schreier(spec, x)
        ok = len(roots) == (0 if spec.abs_trace(x) else 2) and all(
            spec.frob_k(r) ^ r == x for r in roots
        )
        tally.record(ok, lambda: f"Artin-Schreier solve fails for a={x:#x}")


def _constructive_mismatch(spec: FieldSpec, tau: int, nu: int, oracle: List[int]) -> bool:
    try:
        return lemma_core_criteria(spec, tau, nu).solutions != oracle
    except QuadSboxError:
        return True


def _lemma_core_suite(spec: FieldSpec, rng: np.random.Generator, samples: int, tally: _Tally) -> None:
    exhaustive = spec.n <= LEMMA_CORE_EXHAUSTIVE_MAX_N
    constructive_everywhere = spec.n <= TZ_EXHAUSTIVE_MAX_N
    taus = range(spec.q) if exhaustive else rng.integers(0, spec.q, size=LEMMA_CORE_SAMPLED_TAUS).tolist()
    for tau in taus:
        values = base_values(spec, tau)
        observed = np.bincount(values, minlength=spec.q)
        predicted = criteria_counts(spec, tau)
        bad = (predicted != observed) | ~np.isin(observed, (0, 2, 4))
        if constructive_everywhere:
            for nu in range(spec.q):
                if _constructive_mismatch(spec, tau, nu, np.flatnonzero(values == nu).tolist()):
                    bad[nu] = True
        failed = int(bad.sum())
        tally.record(
            failed == 0,
            lambda: f"tau={tau:#x}, nu={int(np.flatnonzero(bad)[0]):#x}: "
            f"criteria {int(predicted[bad][0])} vs oracle {int(observed[bad][0])}",
            count=spec.q,
            failed=failed,
        )

    if constructive_everywhere:
        return
    for tau, nu in rng.integers(0, spec.q, size=(samples, 2)).tolist():
        oracle = lemma_core_oracle(spec, tau, nu).solutions
        tally.record(
            not _constructive_mismatch(spec, tau, nu, oracle),
            lambda: f"tau={tau:#x}, nu={nu:#x}: constructive solutions differ from {oracle}",
        )


def _identities_suite(
    spec: FieldSpec, seed: int, rng: np.random.Generator, samples: int, members: int, tally: _Tally
) -> None:
    for _ in range(samples):
        c = _random_tuple(spec, rng)
        th = compute_thetas(spec, c)
        mul, conj = spec.mul, spec.conj
        ok = mul(th.t2, conj(th.t2)) ^ mul(th.t3, conj(th.t3)) == mul(th.t4, th.t1 ^ th.t4)
        tally.record(ok, lambda: f"theta identity fails for {c.encode(spec)}")

    for c in sample_gamma_members(spec, members, seed):
        checks = identity_suite(spec, c)
        if classify(spec, c).verdict == GammaVerdict.GAMMA0:
            checks += orbit_checks(spec, build_structure_cache(spec, c))
        failed = [check.tag for check in checks if not check.passed]
        tally.record(
            not failed,
            lambda: f"{c.encode(spec)} fails {failed}",
            count=len(checks),
            failed=len(failed),
        )


def _vi_suite(
    spec: FieldSpec, seed: int, rng: np.random.Generator, samples: int, members: int, tally: _Tally
) -> None:
    for _ in range(samples):
        c = _random_tuple(spec, rng)
        a = int(rng.integers(1, spec.q))
        b = int(rng.integers(0, spec.q))
        try:
            compute_vi(spec, c, compute_tau_vector(spec, c, a, b), a, b)
            ok, detail = True, ""
        except QuadSboxError as e:
            ok, detail = False, str(e)
        tally.record(ok, lambda: f"{c.encode(spec)} a={a:#x} b={b:#x}: {detail}")

    for c in sample_gamma_members(spec, members, seed):
        cache = build_structure_cache(spec, c)
        a = int(rng.integers(1, spec.q))
        b = int(rng.integers(0, spec.q))
        if m_value(spec, cache.thetas, a) == 0:
            continue
        try:
            params = gen_eq_params(spec, cache, c, a, b)
            tv = compute_tau_vector(spec, c, a, b)
            ok = normalized_equation_solutions(spec, params) == scaled_equation_solutions(spec, tv)
            detail = "normalized and scaled solution sets differ"
        except QuadSboxError as e:
            ok, detail = False, str(e)
        tally.record(ok, lambda: f"{c.encode(spec)} a={a:#x} b={b:#x}: {detail}")


def _theorem_suite(spec: FieldSpec, seed: int, tally: _Tally) -> None:
    for verdict in (GammaVerdict.GAMMA0, GammaVerdict.GAMMA1):
        for c in sample_gamma_members(spec, SUITE_THEOREM_TUPLES, seed, verdict=verdict):
            result = verify_theorem(spec, c, BetaMode.FULL, seed=seed)
            tally.record(
                result.consistent,
                lambda: f"{result.tuple_text}: {[a.kind for a in result.anomalies]}",
            )


def run_suite(
    name: SuiteName,
    m: int,
    k: int,
    seed: int,
    samples: Optional[int] = None,
    gamma_members: Optional[int] = None,
) -> SuiteResult:
    """Run one suite over GF(2^(2m)) with exponent k.

    Args:
        name: Suite to run
        m: Half the extension degree
        k: Exponent parameter
        seed: Philox key for every random draw
        samples: Random inputs; defaults to FIELD_SUITE_SAMPLE_SIZE for the
            field suite and SUITE_SAMPLE_SIZE otherwise
        gamma_members: Gamma members for the identities and vi suites

    Raises:
        FieldDomainError: If (m, k) is invalid
    """
    spec = get_field_spec(m, k)
    rng = np.random.Generator(np.random.Philox(seed))
    default_size = FIELD_SUITE_SAMPLE_SIZE if name == SuiteName.FIELD else SUITE_SAMPLE_SIZE
    size = default_size if samples is None else samples
    members = SUITE_GAMMA_MEMBERS if gamma_members is None else gamma_members
    result = SuiteResult(suite=name, m=m, k=k, seed=seed, samples=size, gamma_members=members)
    tally = _Tally(result)

    runners: Dict[SuiteName, Callable[[], None]] = {
        SuiteName.FIELD: lambda: _field_suite(spec, rng, size, tally),
        SuiteName.LEMMA_CORE: lambda: _lemma_core_suite(spec, rng, size, tally),
        SuiteName.IDENTITIES: lambda: _identities_suite(spec, seed, rng, size, members, tally),
        SuiteName.VI: lambda: _vi_suite(spec, seed, rng, size, members, tally),
        SuiteName.THEOREM: lambda: _theorem_suite(spec, seed, tally),
    }
    logger.info(f"Running suite {name.value} for m={m}, k={k}, seed={seed}, samples={size}, members={members}")
    runners[name]()
    logger.info(f"Suite {name.value}: {result.passed}/{result.checked} passed")
    return result
