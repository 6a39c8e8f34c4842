"""
Campaign configuration.
"""

from __future__ import annotations

import hashlib
import json
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from ..config import BETA_FIRST_N_DEFAULT, DEFAULT_SEED, EXHAUSTIVE_MAX_LOG2
from ..errors import FieldDomainError
from ..field import get_field_spec, validate_parameters


class SearchMode(str, Enum):
    """How tuples are visited."""

    EXHAUSTIVE = "exhaustive"
    SAMPLE = "sample"


class BetaPolicy(str, Enum):
    """Which Gamma members get a full BCT."""

    ALL = "all"
    FIRST_N = "first_n"
    SKIP = "skip"


class SearchConfig(BaseModel):
    """Parameters of one campaign; everything a record needs to be reproduced."""

    m: int = Field(..., ge=1, description="Half the extension degree (odd)")
    k: int = Field(..., ge=1, description="Family exponent (odd, coprime to m)")
    mode: SearchMode = Field(default=SearchMode.SAMPLE)
    sample_count: int = Field(default=10_000, ge=0, description="Uniform tuples drawn in sample mode")
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=1 << 64, description="Philox key")
    beta_policy: BetaPolicy = Field(default=BetaPolicy.FIRST_N)
    beta_first_n: int = Field(
        default=BETA_FIRST_N_DEFAULT, ge=0, description="Full verdicts per Gamma class under first_n"
    )
    gamma_quota: int = Field(
        default=0, ge=0, description="Extra Gamma0 and Gamma1 members drawn by rejection in sample mode"
    )
    converse: bool = Field(default=False, description="Run the non-Gamma permutation experiment")
    threads: int = Field(default=1, ge=1, description="Process workers for the classification phase")
    output_path: Optional[str] = Field(default=None, description="JSONL output; stdout when unset")
    summary_path: Optional[str] = Field(default=None, description="Summary JSON output")
    csv_path: Optional[str] = Field(default=None, description="Histogram CSV output")
    record_timing: bool = Field(default=False, description="Attach elapsed seconds to records")

    @model_validator(mode="after")
    def _check_parameters(self) -> "SearchConfig":
        try:
            validate_parameters(self.m, self.k)
        except FieldDomainError as e:
            raise ValueError(str(e)) from e
        if self.mode == SearchMode.EXHAUSTIVE and 8 * self.m > EXHAUSTIVE_MAX_LOG2:
            raise ValueError(
                f"Exhaustive search needs 4n <= {EXHAUSTIVE_MAX_LOG2}, got 4n = {8 * self.m}"
            )
        return self

    @property
    def n(self) -> int:
        return 2 * self.m

    def config_hash(self) -> str:
        """SHA-256 over the fields that determine the records."""
        spec = get_field_spec(self.m, self.k)
        canonical = {
            "m": self.m,
            "k": self.k,
            "modulus": format(spec.modulus, "x"),
            "seed": self.seed,
            "mode": self.mode.value,
            "sample_count": self.sample_count,
            "beta_policy": self.beta_policy.value,
            "beta_first_n": self.beta_first_n,
            "gamma_quota": self.gamma_quota,
        }
        payload = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()
