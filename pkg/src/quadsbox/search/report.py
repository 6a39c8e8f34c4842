"""
Campaign records and their writers.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import sys
from types import TracebackType
from typing import IO, Dict, List, Optional, Tuple, Type

from pydantic import BaseModel, ConfigDict, Field

from ..config import ENV_FLUSH
from ..family import REASON_GAMMA_BRANCH, GammaClass, GammaVerdict
from ..theory import Anomaly, TheoremVerdict, flatten_gamma

logger = logging.getLogger(__name__)


class ReportRecord(BaseModel):
    """One JSONL line: a tuple's verdict plus the config hash that produced it.

    Light records (Gamma members outside the beta policy subset) carry only
    the class and the permutation flag; delta and the spectra stay unset.
    """

    model_config = ConfigDict(populate_by_name=True)

    config_hash: str
    tuple_text: str = Field(..., alias="tuple")
    gamma: GammaClass
    permutation: bool
    delta: Optional[int] = None
    beta: Optional[int] = None
    consistent: bool = True
    anomalies: List[Anomaly] = Field(default_factory=list)
    ddt_spectrum: Optional[List[Tuple[int, int]]] = None
    bct_spectrum: Optional[List[Tuple[int, int]]] = None
    spectra_match: Optional[bool] = Field(default=None, description="Same spectra as the Gold reference")
    elapsed_seconds: Optional[float] = None

    @classmethod
    def from_verdict(
        cls, config_hash: str, verdict: TheoremVerdict, elapsed: Optional[float] = None
    ) -> "ReportRecord":
        return cls(
            config_hash=config_hash,
            tuple_text=verdict.tuple_text,
            gamma=verdict.gamma,
            permutation=verdict.permutation,
            delta=verdict.delta,
            beta=verdict.beta,
            consistent=verdict.consistent,
            anomalies=verdict.anomalies,
            ddt_spectrum=verdict.ddt_spectrum,
            bct_spectrum=verdict.bct_spectrum,
            elapsed_seconds=elapsed,
        )

    @classmethod
    def light(cls, config_hash: str, tuple_text: str, verdict: GammaVerdict, permutation: bool) -> "ReportRecord":
        anomalies = [] if permutation else [Anomaly(kind="not_permutation")]
        return cls(
            config_hash=config_hash,
            tuple_text=tuple_text,
            gamma=GammaClass(verdict=verdict, reasons=[REASON_GAMMA_BRANCH]),
            permutation=permutation,
            consistent=permutation,
            anomalies=anomalies,
        )

    @property
    def full(self) -> bool:
        return self.delta is not None

    def to_json(self) -> str:
        return json.dumps(
            flatten_gamma(self.model_dump(mode="json", by_alias=True, exclude_none=True)),
            sort_keys=True,
            separators=(",", ":"),
        )


def flush_requested() -> bool:
    return os.getenv(ENV_FLUSH, "").lower() in ("1", "true", "yes")


class JsonlWriter:
    """Writes one JSON object per line to a file or stdout.

    Use as a context manager; a path of None writes to stdout and leaves it
    open on exit.
    """

    def __init__(self, path: Optional[str] = None, flush: Optional[bool] = None):
        self.path = path
        self.flush = flush_requested() if flush is None else flush
        self.count = 0
        self._stream: Optional[IO[str]] = None

    def __enter__(self) -> "JsonlWriter":
        self._stream = open(self.path, "w", encoding="utf-8") if self.path else sys.stdout
        return self

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc: Optional[BaseException],
        tb: Optional[TracebackType],
    ) -> None:
        if self._stream is None:
            return
        if self.path:
            self._stream.close()
        else:
            self._stream.flush()
        logger.info(f"Wrote {self.count} records to {self.path or 'stdout'}")
        self._stream = None

    def write_line(self, line: str) -> None:
        if self._stream is None:
            raise RuntimeError("JsonlWriter used outside its context")
        self._stream.write(line + "\n")
        self.count += 1
        if self.flush:
            self._stream.flush()

    def write(self, record: ReportRecord) -> None:
        self.write_line(record.to_json())


def histogram_rows(
    delta_histograms: Dict[str, Dict[int, int]], beta_histograms: Dict[str, Dict[int, int]]
) -> List[Tuple[str, str, int, int]]:
    """(class, metric, value, count) rows in a stable order."""
    rows: List[Tuple[str, str, int, int]] = []
    for metric, histograms in (("delta", delta_histograms), ("beta", beta_histograms)):
        for label in sorted(histograms):
            for value, count in sorted(histograms[label].items()):
                rows.append((label, metric, value, count))
    return rows


def write_histograms_csv(
    delta_histograms: Dict[str, Dict[int, int]], beta_histograms: Dict[str, Dict[int, int]], path: str
) -> int:
    """Write the class-conditional histograms as CSV.

    Returns:
        Number of data rows written
    """
    rows = histogram_rows(delta_histograms, beta_histograms)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["class", "metric", "value", "count"])
        writer.writerows(rows)
    logger.info(f"Wrote {len(rows)} histogram rows to {path}")
    return len(rows)
