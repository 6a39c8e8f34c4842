"""
S-box analytics: lookup tables, permutation testing, DDT and BCT.
"""

from .table import (
    ExportFormat,
    SboxTable,
    build_table,
    export_table,
    identity_table,
    is_permutation,
    monomial_table,
    random_permutation_table,
)
from .analysis import (
    BctMethod,
    BctSummary,
    DdtSummary,
    bct_definitional,
    bct_lqsl,
    ddt,
    ddt_row,
    lqsl_row,
    pair_histogram,
    spectra_report,
)

__all__ = [
    "ExportFormat",
    "SboxTable",
    "build_table",
    "export_table",
    "identity_table",
    "is_permutation",
    "monomial_table",
    "random_permutation_table",
    "BctMethod",
    "BctSummary",
    "DdtSummary",
    "bct_definitional",
    "bct_lqsl",
    "ddt",
    "ddt_row",
    "lqsl_row",
    "pair_histogram",
    "spectra_report",
]
