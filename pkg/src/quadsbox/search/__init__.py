"""
Search campaigns over the coefficient space, baselines and report output.
"""

from .config import BetaPolicy, SearchConfig, SearchMode
from .report import JsonlWriter, ReportRecord, histogram_rows, write_histograms_csv
from .baseline import BaselineFamily, BaselineRecord, baseline, baseline_table, gold_exponent
from .campaign import (
    CampaignResult,
    CampaignSummary,
    ConverseSummary,
    SpectraScreen,
    converse_experiment,
    run_campaign,
    write_campaign,
)

__all__ = [
    "BetaPolicy",
    "SearchConfig",
    "SearchMode",
    "JsonlWriter",
    "ReportRecord",
    "histogram_rows",
    "write_histograms_csv",
    "BaselineFamily",
    "BaselineRecord",
    "baseline",
    "baseline_table",
    "gold_exponent",
    "CampaignResult",
    "CampaignSummary",
    "ConverseSummary",
    "SpectraScreen",
    "converse_experiment",
    "run_campaign",
    "write_campaign",
]
