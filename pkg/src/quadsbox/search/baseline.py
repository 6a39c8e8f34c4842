"""
Known beta = 4 permutations used as reference points.

    gold     x^(2^t + 1)   over GF(2^(2m)), m odd, gcd(2m, t) = 2
    inverse  x^(2^n - 2)   over GF(2^(2m)), m odd
"""

from __future__ import annotations

import logging
from enum import Enum
from math import gcd
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from ..errors import FieldDomainError, PreconditionError
from ..field import FieldSpec, get_field_spec
from ..sbox import SboxTable, ddt, monomial_table
from ..theory import Anomaly, compare_bct_methods

logger = logging.getLogger(__name__)


class BaselineFamily(str, Enum):
    GOLD = "gold"
    INVERSE = "inverse"


class BaselineRecord(BaseModel):
    """Observed properties of a baseline power map."""

    family: BaselineFamily
    m: int
    t: Optional[int] = Field(default=None, description="Gold parameter")
    exponent: int
    permutation: bool
    delta: int
    beta: Optional[int] = None
    consistent: bool = True
    anomalies: List[Anomaly] = Field(default_factory=list)
    ddt_spectrum: List[Tuple[int, int]] = Field(default_factory=list)
    bct_spectrum: Optional[List[Tuple[int, int]]] = None

    def record(self) -> dict:
        return self.model_dump(mode="json", exclude_none=True)


def gold_exponent(spec: FieldSpec, t: int) -> int:
    """2^t + 1 with t reduced mod n."""
    return (1 << (t % spec.n)) + 1


def baseline_table(family: BaselineFamily, m: int, t: Optional[int] = None) -> Tuple[FieldSpec, SboxTable, int]:
    """Build the baseline table after checking its parameters.

    The field is GF(2^(2m)) with the smallest irreducible modulus, the same
    one f_c uses for every k.

    Raises:
        PreconditionError: If m is even, or t is missing or gcd(2m, t) != 2 for gold
    """
    try:
        spec = get_field_spec(m, 1)
    except FieldDomainError as e:
        raise PreconditionError(f"Baselines need an odd m: {e}") from e

    if family == BaselineFamily.GOLD:
        if t is None:
            raise PreconditionError("The gold baseline needs t")
        if t < 1 or gcd(spec.n, t) != 2:
            raise PreconditionError(f"Gold requires gcd(2m, t) = 2, got gcd({spec.n}, {t}) = {gcd(spec.n, t)}")
        exponent = gold_exponent(spec, t)
    else:
        exponent = spec.q - 2
    return spec, monomial_table(spec, exponent), exponent


def baseline(family: BaselineFamily, m: int, t: Optional[int] = None, threads: int = 1) -> BaselineRecord:
    """Analyze a baseline and check that it is a permutation with beta = 4.

    Both BCT methods are computed and must agree.

    Raises:
        PreconditionError: If the parameters are outside the baseline's range
    """
    spec, table, exponent = baseline_table(family, m, t)
    anomalies: List[Anomaly] = []
    if not table.bijective:
        anomalies.append(Anomaly(kind="not_permutation"))

    ddt_summary = ddt(table, threads=threads)
    beta = None
    bct_spectrum = None
    if table.bijective:
        bct_summary = compare_bct_methods(table, threads, anomalies)
        beta = bct_summary.uniformity
        bct_spectrum = bct_summary.spectrum
        if beta != 4:
            anomalies.append(Anomaly(kind="beta_mismatch", detail=f"expected 4, got {beta}"))

    if anomalies:
        logger.warning(f"Baseline {family.value} m={m} t={t}: {[a.kind for a in anomalies]}")
    return BaselineRecord(
        family=family,
        m=m,
        t=t if family == BaselineFamily.GOLD else None,
        exponent=exponent,
        permutation=table.bijective,
        delta=ddt_summary.uniformity,
        beta=beta,
        consistent=not anomalies,
        anomalies=anomalies,
        ddt_spectrum=ddt_summary.spectrum,
        bct_spectrum=bct_spectrum,
    )
