"""
The quadrinomial family f_c.

This module provides coefficient tuples and their theta vectors, the
Gamma / Gamma0 / Gamma1 classification (scalar and batched), evaluation,
the even-k reduction, and the structural constants xi, M(a) and eta used
by the difference-equation analysis.
"""

from .quadrinomial import (
    REASON_BITS,
    REASON_GAMMA_BRANCH,
    VERDICT_CODES,
    CoefficientTuple,
    GammaClass,
    GammaVerdict,
    ThetaVector,
    batch_tables,
    classify,
    classify_batch,
    classify_thetas,
    compute_thetas,
    eval_f,
    eval_f_table,
    even_k_reduce,
    monomial_basis,
    permutation_mask,
    quadrinomial_value,
    reasons_from_bits,
    sample_gamma_members,
)
from .structure import (
    IdentityCheck,
    StructureCache,
    big_m,
    build_structure_cache,
    compute_xi,
    eta,
    identity_suite,
    m_value,
    orbit,
    orbit_checks,
    orbit_f_sum,
    v_eta,
    v_m_value,
)

__all__ = [
    "REASON_BITS",
    "REASON_GAMMA_BRANCH",
    "VERDICT_CODES",
    "CoefficientTuple",
    "GammaClass",
    "GammaVerdict",
    "ThetaVector",
    "batch_tables",
    "classify",
    "classify_batch",
    "classify_thetas",
    "compute_thetas",
    "eval_f",
    "eval_f_table",
    "even_k_reduce",
    "monomial_basis",
    "permutation_mask",
    "quadrinomial_value",
    "reasons_from_bits",
    "sample_gamma_members",
    "IdentityCheck",
    "StructureCache",
    "big_m",
    "build_structure_cache",
    "compute_xi",
    "eta",
    "identity_suite",
    "m_value",
    "orbit",
    "orbit_checks",
    "orbit_f_sum",
    "v_eta",
    "v_m_value",
]
