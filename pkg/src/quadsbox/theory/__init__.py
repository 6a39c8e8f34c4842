"""
Executable analysis of the difference and boomerang equations of f_c.

This module provides the solution-count criteria for
x^(2^k) + tau xb + (tau + 1) x + nu = 0 with their brute-force oracle,
the reduction of f(x + a) + f(x) = b to that equation, the v1 = 0 branch,
the orbit trace checks behind the boomerang bound, per-tuple theorem
verdicts and the named verification suites.
"""

from .lemma_core import (
    LemmaBranch,
    LemmaCoreVerdict,
    base_values,
    compare_all,
    criteria_counts,
    lemma_core_criteria,
    lemma_core_oracle,
    oracle_counts,
)
from .difference import (
    ReducedSystemReport,
    TauNuParams,
    TauVector,
    V1ZeroReport,
    ViVector,
    compute_tau_vector,
    compute_vi,
    diff_eq_count,
    normalized_equation_solutions,
    find_v1_zero_witness,
    gen_eq_params,
    predicted_ddt_row,
    reduced_system_counts,
    scaled_equation_solutions,
    v1_zero_analysis,
)
from .boomerang import TzReport, tz_check
from .theorem import (
    Anomaly,
    BetaMode,
    TheoremVerdict,
    compare_bct_methods,
    flatten_gamma,
    verify_theorem,
)
from .suites import SuiteName, SuiteResult, run_suite

__all__ = [
    "LemmaBranch",
    "LemmaCoreVerdict",
    "base_values",
    "compare_all",
    "criteria_counts",
    "lemma_core_criteria",
    "lemma_core_oracle",
    "oracle_counts",
    "ReducedSystemReport",
    "TauNuParams",
    "TauVector",
    "V1ZeroReport",
    "ViVector",
    "compute_tau_vector",
    "compute_vi",
    "diff_eq_count",
    "normalized_equation_solutions",
    "find_v1_zero_witness",
    "gen_eq_params",
    "predicted_ddt_row",
    "reduced_system_counts",
    "scaled_equation_solutions",
    "v1_zero_analysis",
    "TzReport",
    "tz_check",
    "Anomaly",
    "BetaMode",
    "TheoremVerdict",
    "compare_bct_methods",
    "flatten_gamma",
    "verify_theorem",
    "SuiteName",
    "SuiteResult",
    "run_suite",
]
