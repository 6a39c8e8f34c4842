"""
Quadrinomial S-boxes over GF(2^2m).

This package implements a toolkit that can:
- Do arithmetic in GF(2^n), n = 2m, with conjugation and subfield traces
- Classify quadrinomial coefficient tuples into Gamma0, Gamma1 or neither
- Compute differential and boomerang uniformity of lookup tables
- Check the difference-equation analysis of the family step by step
- Run exhaustive and sampled campaigns over the coefficient space
"""

from .cli import main
from .errors import (
    FieldDomainError,
    NotAPermutationError,
    PreconditionError,
    QuadSboxError,
    TheoryConsistencyError,
)
from .family import CoefficientTuple, GammaVerdict, classify
from .field import FieldSpec, get_field_spec
from .sbox import SboxTable, bct_lqsl, build_table, ddt
from .search import SearchConfig, baseline, run_campaign
from .theory import TheoremVerdict, run_suite, verify_theorem

__version__ = "0.1.0"
__all__ = [
    "main",
    "FieldDomainError",
    "NotAPermutationError",
    "PreconditionError",
    "QuadSboxError",
    "TheoryConsistencyError",
    "CoefficientTuple",
    "GammaVerdict",
    "classify",
    "FieldSpec",
    "get_field_spec",
    "SboxTable",
    "bct_lqsl",
    "build_table",
    "ddt",
    "SearchConfig",
    "baseline",
    "run_campaign",
    "TheoremVerdict",
    "run_suite",
    "verify_theorem",
]
