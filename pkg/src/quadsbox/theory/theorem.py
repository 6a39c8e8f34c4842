"""
Per-tuple verdicts on the permutation, differential and boomerang claims.

Expected behaviour by class:
    Gamma0  permutation, delta = 4, beta = 4
    Gamma1  permutation, delta = 2^(m+1), beta >= 2^(m+1)
    NotGamma  nothing expected; observations are recorded

Any mismatch, and any consistency error raised by the analytical
machinery, becomes an anomaly on the verdict instead of an exception.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import DEFAULT_SEED, FULL_TABLE_MAX_N, TZ_EXHAUSTIVE_MAX_N, TZ_SAMPLE_SIZE
from ..errors import PreconditionError, TheoryConsistencyError
from ..family import (
    CoefficientTuple,
    GammaClass,
    GammaVerdict,
    StructureCache,
    build_structure_cache,
    classify,
    eval_f,
    m_value,
)
from ..field import FieldSpec
from ..sbox import (
    BctSummary,
    SboxTable,
    bct_definitional,
    bct_lqsl,
    build_table,
    ddt,
    ddt_row,
    lqsl_row,
)
from .boomerang import tz_check
from .difference import (
    find_v1_zero_witness,
    predicted_ddt_row,
    reduced_system_counts,
    v1_zero_analysis,
)

logger = logging.getLogger(__name__)


class BetaMode(str, Enum):
    """Whether verify_theorem computes the boomerang uniformity."""

    FULL = "full"
    SKIP = "skip"


class Anomaly(BaseModel):
    """One disagreement between observation and claim."""

    model_config = ConfigDict(frozen=True)

    kind: str
    a: Optional[int] = None
    b: Optional[int] = None
    detail: str = ""

    def sort_key(self) -> Tuple[int, int, str]:
        return (
            -1 if self.a is None else self.a,
            -1 if self.b is None else self.b,
            self.kind,
        )


def flatten_gamma(data: dict) -> dict:
    """Replace the nested "gamma" object with top-level "verdict" and "reasons" keys."""
    gamma = data.pop("gamma")
    flat = {"tuple": data.pop("tuple"), "verdict": gamma["verdict"], "reasons": gamma["reasons"]}
    flat.update(data)
    return flat


class TheoremVerdict(BaseModel):
    """Observations for one coefficient tuple and whether they match the claims."""

    model_config = ConfigDict(populate_by_name=True)

    tuple_text: str = Field(..., alias="tuple", description="c0:c1:c2:c3 in hex")
    gamma: GammaClass
    permutation: bool
    delta: int
    beta: Optional[int] = None
    consistent: bool = True
    anomalies: List[Anomaly] = Field(default_factory=list)
    ddt_spectrum: List[Tuple[int, int]] = Field(default_factory=list)
    bct_spectrum: Optional[List[Tuple[int, int]]] = None

    def record(self) -> dict:
        """JSON-ready dict with the external field names and a top-level verdict."""
        return flatten_gamma(self.model_dump(mode="json", by_alias=True))


def _direction_sample(spec: FieldSpec, seed: int) -> np.ndarray:
    if spec.n <= TZ_EXHAUSTIVE_MAX_N:
        return spec.elements()[1:]
    rng = np.random.Generator(np.random.Philox(seed))
    size = min(TZ_SAMPLE_SIZE, spec.q - 1)
    return np.sort(rng.choice(spec.q - 1, size=size, replace=False) + 1)


def compare_bct_methods(t: SboxTable, threads: int, anomalies: List[Anomaly]) -> BctSummary:
    """Compute the BCT both ways, append an anomaly if they differ, return the LQSL one."""
    keep_full = t.n <= FULL_TABLE_MAX_N
    definitional = bct_definitional(t, keep_full=keep_full, threads=threads)
    lqsl = bct_lqsl(t, keep_full=keep_full, threads=threads)
    if definitional.full_table is not None and lqsl.full_table is not None:
        diff = np.argwhere(definitional.full_table != lqsl.full_table)
        if diff.size:
            a, b = (int(v) for v in diff[0])
            anomalies.append(
                Anomaly(kind="bct_methods_disagree", a=a, b=b, detail=f"{diff.shape[0]} cells differ")
            )
    elif definitional.spectrum != lqsl.spectrum:
        anomalies.append(Anomaly(kind="bct_methods_disagree", detail="spectra differ"))
    return lqsl


def _gamma0_directions(
    spec: FieldSpec,
    cache: StructureCache,
    c: CoefficientTuple,
    t: SboxTable,
    directions: np.ndarray,
    anomalies: List[Anomaly],
) -> None:
    for a in directions.tolist():
        if m_value(spec, cache.thetas, a) == 0:
            anomalies.append(Anomaly(kind="m_zero_in_gamma0", a=a))
            continue
        predicted = predicted_ddt_row(spec, cache, c, a)
        observed = ddt_row(t, a)
        mismatch = np.flatnonzero(predicted != observed)
        if mismatch.size:
            anomalies.append(Anomaly(kind="ddt_row_mismatch", a=a, b=int(mismatch[0])))
        if not t.bijective:
            continue
        report = tz_check(spec, cache, c, a)
        for failure in report.failures:
            anomalies.append(Anomaly(kind="tz_check", a=a, detail=failure))
        s_row = lqsl_row(t, a)
        mismatch = np.flatnonzero(report.predicted_row != s_row)
        if mismatch.size:
            anomalies.append(Anomaly(kind="lqsl_row_mismatch", a=a, b=int(mismatch[0])))


def _gamma1_directions(
    spec: FieldSpec,
    cache: StructureCache,
    c: CoefficientTuple,
    t: SboxTable,
    directions: np.ndarray,
    anomalies: List[Anomaly],
) -> None:
    witness = find_v1_zero_witness(spec, cache)
    if witness is None:
        anomalies.append(Anomaly(kind="no_v1_zero_witness"))
    else:
        report = v1_zero_analysis(spec, cache, c, witness)
        for check in report.checks:
            if not check.passed:
                anomalies.append(Anomaly(kind="v1_zero_analysis", a=witness, detail=check.tag))
        full = 1 << (spec.m + 1)
        for b, expected in ((0, 0), (eval_f(spec, c, witness), full)):
            counts = reduced_system_counts(spec, cache, c, witness, b)
            if not counts.predicted == counts.enumerated == counts.observed == expected:
                anomalies.append(
                    Anomaly(
                        kind="reduced_system",
                        a=witness,
                        b=b,
                        detail=(
                            f"predicted={counts.predicted} enumerated={counts.enumerated} "
                            f"observed={counts.observed} expected={expected}"
                        ),
                    )
                )
        directions = np.union1d(directions, [witness])

    for a in directions.tolist():
        predicted = predicted_ddt_row(spec, cache, c, a)
        mismatch = np.flatnonzero(predicted != ddt_row(t, a))
        if mismatch.size:
            anomalies.append(Anomaly(kind="ddt_row_mismatch", a=a, b=int(mismatch[0])))


def verify_theorem(
    spec: FieldSpec,
    c: CoefficientTuple,
    beta_mode: BetaMode = BetaMode.FULL,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
) -> TheoremVerdict:
    """Classify c, analyze f_c and check the observations against the claims.

    Args:
        spec: The field
        c: Coefficient tuple
        beta_mode: Compute beta (both BCT methods) or skip it
        seed: Philox key for sampling directions a when n is large
        threads: Worker threads for the table analytics

    Returns:
        The verdict; consistent is False iff anomalies were recorded
    """
    gamma = classify(spec, c)
    t = build_table(spec, c)
    permutation = t.bijective
    anomalies: List[Anomaly] = []

    if gamma.is_gamma and not permutation:
        anomalies.append(Anomaly(kind="not_permutation"))

    ddt_summary = ddt(t, threads=threads)
    delta = ddt_summary.uniformity

    beta = None
    bct_spectrum = None
    if beta_mode == BetaMode.FULL and permutation:
        bct_summary = compare_bct_methods(t, threads, anomalies)
        beta = bct_summary.uniformity
        bct_spectrum = bct_summary.spectrum
        if beta < delta:
            anomalies.append(Anomaly(kind="beta_below_delta", detail=f"beta={beta} delta={delta}"))

    full = 1 << (spec.m + 1)
    if gamma.verdict == GammaVerdict.GAMMA0:
        if delta != 4:
            anomalies.append(Anomaly(kind="delta_mismatch", detail=f"expected 4, got {delta}"))
        if beta is not None and beta != 4:
            anomalies.append(Anomaly(kind="beta_mismatch", detail=f"expected 4, got {beta}"))
    elif gamma.verdict == GammaVerdict.GAMMA1:
        if delta != full:
            anomalies.append(Anomaly(kind="delta_mismatch", detail=f"expected {full}, got {delta}"))
        if beta is not None and beta < full:
            anomalies.append(Anomaly(kind="beta_mismatch", detail=f"expected >= {full}, got {beta}"))

    if gamma.is_gamma:
        directions = _direction_sample(spec, seed)
        try:
            cache = build_structure_cache(spec, c)
            if gamma.verdict == GammaVerdict.GAMMA0:
                _gamma0_directions(spec, cache, c, t, directions, anomalies)
            else:
                _gamma1_directions(spec, cache, c, t, directions, anomalies)
        except (TheoryConsistencyError, PreconditionError) as e:
            logger.error(f"Consistency failure for {c.encode(spec)}: {e}")
            anomalies.append(Anomaly(kind="consistency_error", detail=str(e)))

    anomalies.sort(key=Anomaly.sort_key)
    if anomalies:
        logger.warning(f"{c.encode(spec)} ({gamma.verdict.value}): {len(anomalies)} anomalies")
    return TheoremVerdict(
        tuple_text=c.encode(spec),
        gamma=gamma,
        permutation=permutation,
        delta=delta,
        beta=beta,
        consistent=not anomalies,
        anomalies=anomalies,
        ddt_spectrum=ddt_summary.spectrum,
        bct_spectrum=bct_spectrum,
    )
