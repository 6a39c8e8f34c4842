"""
Coefficient-space campaigns.

A campaign runs in two phases:

1. Classification. The tuple space (or a seeded sample of it) is cut into
   contiguous chunks that process workers classify with numpy batches.
   Gamma members are checked for bijectivity; with ``converse`` set, every
   NotGamma tuple is checked as well.
2. Verification. The beta policy picks a subset of Gamma members per class
   that get a full ``verify_theorem`` verdict, again across process workers.

Chunks and verdicts are merged in order, and records are emitted sorted by
tuple, so output depends only on the configuration.
"""

from __future__ import annotations

import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import (
    ANALYTICS_MAX_N,
    CONVERSE_FINDINGS_MAX,
    SAMPLE_CHUNK_SIZE,
    TABLE_BATCH_ELEMENTS,
    TABLE_BATCH_SIZE,
)
from ..errors import QuadSboxError
from ..family import (
    REASON_BITS,
    VERDICT_CODES,
    CoefficientTuple,
    GammaVerdict,
    batch_tables,
    classify_batch,
    permutation_mask,
    sample_gamma_members,
)
from ..field import FieldSpec, get_field_spec, tuple_to_text
from ..sbox import monomial_table, spectra_report
from ..theory import Anomaly, BetaMode, TheoremVerdict, verify_theorem
from .baseline import gold_exponent
from .config import BetaPolicy, SearchConfig, SearchMode
from .report import JsonlWriter, ReportRecord, write_histograms_csv

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# PRNG stream families under the campaign seed
_SAMPLE_STREAM = 0
_QUOTA_STREAM = 1


class ConverseSummary(BaseModel):
    """Permutations found outside Gamma."""

    k: int
    checked: int = 0
    permutations_found: int = 0
    findings: List[str] = Field(default_factory=list, description="Tuples, capped at CONVERSE_FINDINGS_MAX")
    expected: Optional[int] = Field(default=None, description="0 when k = 1, otherwise no expectation")

    @property
    def passed(self) -> Optional[bool]:
        if self.expected is None:
            return None
        return self.permutations_found == self.expected


class SpectraScreen(BaseModel):
    """Gamma0 spectra compared with the Gold map x^(2^(m+k)+1)."""

    gold_exponent: int
    gold_ddt_spectrum: List[Tuple[int, int]]
    gold_bct_spectrum: List[Tuple[int, int]]
    screened: int = 0
    matching: int = 0
    mismatched: List[str] = Field(default_factory=list)


class CampaignSummary(BaseModel):
    """Aggregate counts of one campaign."""

    config_hash: str
    m: int
    k: int
    modulus_hex: str
    mode: SearchMode
    visited: int = Field(default=0, description="Tuples classified (sample draws count with repetition)")
    quota_members: int = Field(default=0, description="Gamma members added by rejection sampling")
    class_counts: Dict[str, int] = Field(default_factory=dict)
    permutation_counts: Dict[str, int] = Field(default_factory=dict)
    reason_counts: Dict[str, int] = Field(default_factory=dict)
    full_verdicts: int = 0
    anomaly_count: int = 0
    delta_histograms: Dict[str, Dict[int, int]] = Field(default_factory=dict)
    beta_histograms: Dict[str, Dict[int, int]] = Field(default_factory=dict)
    converse: Optional[ConverseSummary] = None
    spectra_screen: Optional[SpectraScreen] = None
    elapsed_seconds: Optional[float] = None

    def record(self) -> dict:
        return self.model_dump(mode="json", exclude_none=True)


class CampaignResult(BaseModel):
    summary: CampaignSummary
    records: List[ReportRecord] = Field(default_factory=list)


# ----------------------------------------------------------------------
# Phase 1: classification
# ----------------------------------------------------------------------


class _ScanTask(BaseModel):
    m: int
    k: int
    mode: SearchMode
    start: int = Field(..., description="First tuple index, or the chunk number in sample mode")
    size: int
    seed: int
    converse: bool


class _ScanResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    class_counts: np.ndarray
    reason_bits: np.ndarray
    gamma_tuples: np.ndarray
    gamma_codes: np.ndarray
    gamma_permutation: np.ndarray
    converse_checked: int = 0
    converse_found: np.ndarray


def _tuples_from_indices(spec: FieldSpec, indices: np.ndarray) -> np.ndarray:
    """(N, 4) coefficient rows for tuple indices, c0 most significant."""
    n, mask = spec.n, spec.q - 1
    return np.stack(
        [(indices >> (3 * n)) & mask, (indices >> (2 * n)) & mask, (indices >> n) & mask, indices & mask],
        axis=1,
    )


def _task_batches(spec: FieldSpec, task: _ScanTask) -> Iterator[np.ndarray]:
    if task.mode == SearchMode.EXHAUSTIVE:
        stop = task.start + task.size
        for lo in range(task.start, stop, TABLE_BATCH_SIZE):
            yield _tuples_from_indices(spec, np.arange(lo, min(lo + TABLE_BATCH_SIZE, stop), dtype=np.int64))
        return
    stream = np.random.SeedSequence(task.seed, spawn_key=(_SAMPLE_STREAM, task.start))
    rng = np.random.Generator(np.random.Philox(stream))
    draws = rng.integers(0, spec.q, size=(task.size, 4), dtype=np.int64)
    for lo in range(0, task.size, TABLE_BATCH_SIZE):
        yield draws[lo : lo + TABLE_BATCH_SIZE]


def _permutation_flags(spec: FieldSpec, rows: np.ndarray) -> np.ndarray:
    step = max(1, TABLE_BATCH_ELEMENTS // spec.q)
    flags = [
        permutation_mask(batch_tables(spec, *rows[lo : lo + step].T))
        for lo in range(0, rows.shape[0], step)
    ]
    return np.concatenate(flags) if flags else np.zeros(0, dtype=bool)


def _scan_chunk(task: _ScanTask) -> _ScanResult:
    spec = get_field_spec(task.m, task.k)
    class_counts = np.zeros(len(VERDICT_CODES), dtype=np.int64)
    reason_bits = np.zeros(1 << len(REASON_BITS), dtype=np.int64)
    gamma_rows: List[np.ndarray] = []
    gamma_codes: List[np.ndarray] = []
    gamma_perm: List[np.ndarray] = []
    converse_found: List[np.ndarray] = []
    converse_checked = 0

    for rows in _task_batches(spec, task):
        codes, bits = classify_batch(spec, *rows.T)
        class_counts += np.bincount(codes, minlength=len(VERDICT_CODES))
        not_gamma = codes == 0
        reason_bits += np.bincount(bits[not_gamma], minlength=reason_bits.size)

        members = rows[~not_gamma]
        gamma_rows.append(members)
        gamma_codes.append(codes[~not_gamma])
        gamma_perm.append(_permutation_flags(spec, members))

        if task.converse:
            outside = rows[not_gamma]
            converse_checked += outside.shape[0]
            converse_found.append(outside[_permutation_flags(spec, outside)])

    logger.debug(f"Chunk {task.start} done: {class_counts.tolist()}")
    empty = np.zeros((0, 4), dtype=np.int64)
    return _ScanResult(
        class_counts=class_counts,
        reason_bits=reason_bits,
        gamma_tuples=np.concatenate(gamma_rows) if gamma_rows else empty,
        gamma_codes=np.concatenate(gamma_codes) if gamma_codes else np.zeros(0, dtype=np.int8),
        gamma_permutation=np.concatenate(gamma_perm) if gamma_perm else np.zeros(0, dtype=bool),
        converse_checked=converse_checked,
        converse_found=np.concatenate(converse_found) if converse_found else empty,
    )


def _scan_tasks(cfg: SearchConfig, converse: bool) -> List[_ScanTask]:
    q = 1 << cfg.n
    if cfg.mode == SearchMode.EXHAUSTIVE:
        chunk = q**3
        return [
            _ScanTask(m=cfg.m, k=cfg.k, mode=cfg.mode, start=c0 * chunk, size=chunk, seed=cfg.seed, converse=converse)
            for c0 in range(q)
        ]
    tasks = []
    for number, lo in enumerate(range(0, cfg.sample_count, SAMPLE_CHUNK_SIZE)):
        size = min(SAMPLE_CHUNK_SIZE, cfg.sample_count - lo)
        tasks.append(
            _ScanTask(m=cfg.m, k=cfg.k, mode=cfg.mode, start=number, size=size, seed=cfg.seed, converse=converse)
        )
    return tasks


def _parallel_map(fn: Callable[[T], R], tasks: Sequence[T], threads: int, label: str) -> List[R]:
    """Ordered map over process workers; inline for a single worker."""
    results: List[R] = []
    report_every = max(1, len(tasks) // 10)
    if threads <= 1 or len(tasks) <= 1:
        iterator: Iterator[R] = map(fn, tasks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=threads)
        chunksize = max(1, len(tasks) // (threads * 8))
        iterator = pool.map(fn, tasks, chunksize=chunksize)
    try:
        for done, result in enumerate(iterator, start=1):
            results.append(result)
            if done % report_every == 0 or done == len(tasks):
                logger.info(f"{label}: {done}/{len(tasks)}")
    finally:
        if pool is not None:
            pool.shutdown()
    return results


class _ScanOutcome(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    visited: int
    class_counts: np.ndarray
    reason_bits: np.ndarray
    gamma_tuples: np.ndarray
    gamma_codes: np.ndarray
    gamma_permutation: np.ndarray
    converse_checked: int
    converse_found: np.ndarray


def _quota_seed(seed: int, verdict: GammaVerdict) -> int:
    key = 0 if verdict == GammaVerdict.GAMMA0 else 1
    stream = np.random.SeedSequence(seed, spawn_key=(_QUOTA_STREAM, key))
    return int(stream.generate_state(1, dtype=np.uint64)[0])


def _scan(cfg: SearchConfig, spec: FieldSpec, converse: bool) -> _ScanOutcome:
    tasks = _scan_tasks(cfg, converse)
    logger.info(f"Classifying {cfg.mode.value} tuple space of GF(2^{spec.n}) in {len(tasks)} chunks")
    results = _parallel_map(_scan_chunk, tasks, cfg.threads, "classification")

    empty = np.zeros((0, 4), dtype=np.int64)
    gamma = np.concatenate([r.gamma_tuples for r in results]) if results else empty
    codes = np.concatenate([r.gamma_codes for r in results]) if results else np.zeros(0, dtype=np.int8)
    perm = np.concatenate([r.gamma_permutation for r in results]) if results else np.zeros(0, dtype=bool)
    found = np.concatenate([r.converse_found for r in results]) if results else empty

    if gamma.shape[0]:
        gamma, first = np.unique(gamma, axis=0, return_index=True)
        codes, perm = codes[first], perm[first]
    if found.shape[0]:
        found = np.unique(found, axis=0)

    return _ScanOutcome(
        visited=sum(t.size for t in tasks),
        class_counts=sum((r.class_counts for r in results), np.zeros(len(VERDICT_CODES), dtype=np.int64)),
        reason_bits=sum((r.reason_bits for r in results), np.zeros(1 << len(REASON_BITS), dtype=np.int64)),
        gamma_tuples=gamma,
        gamma_codes=codes,
        gamma_permutation=perm,
        converse_checked=sum(r.converse_checked for r in results),
        converse_found=found,
    )


def _add_quota(cfg: SearchConfig, spec: FieldSpec, outcome: _ScanOutcome) -> int:
    """Merge rejection-sampled Gamma0 and Gamma1 members into the scan outcome."""
    if cfg.mode != SearchMode.SAMPLE or cfg.gamma_quota == 0:
        return 0
    extra: List[List[int]] = []
    extra_codes: List[int] = []
    for code, verdict in ((1, GammaVerdict.GAMMA0), (2, GammaVerdict.GAMMA1)):
        for c in sample_gamma_members(spec, cfg.gamma_quota, _quota_seed(cfg.seed, verdict), verdict=verdict):
            extra.append(list(c.values()))
            extra_codes.append(code)
    rows = np.array(extra, dtype=np.int64)
    merged = np.concatenate([outcome.gamma_tuples, rows])
    codes = np.concatenate([outcome.gamma_codes, np.array(extra_codes, dtype=np.int8)])
    perm = np.concatenate([outcome.gamma_permutation, _permutation_flags(spec, rows)])
    merged, first = np.unique(merged, axis=0, return_index=True)
    outcome.gamma_tuples, outcome.gamma_codes, outcome.gamma_permutation = merged, codes[first], perm[first]
    return len(extra)


def _reason_counts(reason_bits: np.ndarray) -> Dict[str, int]:
    bits = np.arange(reason_bits.size)
    return {tag: int(reason_bits[(bits & bit) != 0].sum()) for tag, bit in REASON_BITS.items()}


def _converse_summary(cfg: SearchConfig, spec: FieldSpec, outcome: _ScanOutcome) -> ConverseSummary:
    found = outcome.converse_found
    summary = ConverseSummary(
        k=cfg.k,
        checked=outcome.converse_checked,
        permutations_found=int(found.shape[0]),
        findings=[tuple_to_text(spec, tuple(int(v) for v in row)) for row in found[:CONVERSE_FINDINGS_MAX]],
        expected=0 if cfg.k == 1 else None,
    )
    if summary.permutations_found:
        logger.warning(
            f"Converse experiment (m={cfg.m}, k={cfg.k}): {summary.permutations_found} permutations outside Gamma, "
            f"first {summary.findings[0]}"
        )
    else:
        logger.info(f"Converse experiment (m={cfg.m}, k={cfg.k}): no permutations outside Gamma")
    return summary


def converse_experiment(cfg: SearchConfig) -> ConverseSummary:
    """Look for permutations f_c with c outside Gamma.

    For k = 1 none are expected; for other k the findings are only recorded.
    """
    spec = get_field_spec(cfg.m, cfg.k)
    return _converse_summary(cfg, spec, _scan(cfg, spec, converse=True))


# ----------------------------------------------------------------------
# Phase 2: verification
# ----------------------------------------------------------------------


class _VerifyTask(BaseModel):
    m: int
    k: int
    c: CoefficientTuple
    beta_mode: BetaMode
    seed: int


class _VerifyResult(BaseModel):
    verdict: Optional[TheoremVerdict] = None
    error: Optional[str] = None
    elapsed: float = 0.0


def _verify_tuple(task: _VerifyTask) -> _VerifyResult:
    spec = get_field_spec(task.m, task.k)
    started = time.perf_counter()
    try:
        verdict = verify_theorem(spec, task.c, task.beta_mode, seed=task.seed)
    except QuadSboxError as e:
        logger.error(f"Verification of {task.c.encode(spec)} failed: {e}")
        return _VerifyResult(error=str(e), elapsed=time.perf_counter() - started)
    return _VerifyResult(verdict=verdict, elapsed=time.perf_counter() - started)


def _select_full(cfg: SearchConfig, codes: np.ndarray) -> np.ndarray:
    """Boolean mask of Gamma members that get a full verdict."""
    if cfg.beta_policy == BetaPolicy.ALL:
        return np.ones(codes.shape[0], dtype=bool)
    selected = np.zeros(codes.shape[0], dtype=bool)
    for code in (1, 2):
        selected[np.flatnonzero(codes == code)[: cfg.beta_first_n]] = True
    return selected


def _spectra_screen(spec: FieldSpec, records: List[ReportRecord], threads: int) -> SpectraScreen:
    exponent = gold_exponent(spec, spec.m + spec.k)
    gold_ddt, gold_bct = spectra_report(monomial_table(spec, exponent), threads=threads)
    screen = SpectraScreen(
        gold_exponent=exponent, gold_ddt_spectrum=gold_ddt.spectrum, gold_bct_spectrum=gold_bct.spectrum
    )
    for record in records:
        if record.gamma.verdict != GammaVerdict.GAMMA0 or record.bct_spectrum is None:
            continue
        match = record.ddt_spectrum == gold_ddt.spectrum and record.bct_spectrum == gold_bct.spectrum
        record.spectra_match = match
        screen.screened += 1
        if match:
            screen.matching += 1
        else:
            screen.mismatched.append(record.tuple_text)
    logger.info(f"Spectra screen against x^{exponent}: {screen.matching}/{screen.screened} match")
    return screen


def _histograms(records: List[ReportRecord]) -> Tuple[Dict[str, Dict[int, int]], Dict[str, Dict[int, int]]]:
    delta: Dict[str, Dict[int, int]] = {}
    beta: Dict[str, Dict[int, int]] = {}
    for record in records:
        label = record.gamma.verdict.value
        if record.delta is not None:
            bucket = delta.setdefault(label, {})
            bucket[record.delta] = bucket.get(record.delta, 0) + 1
        if record.beta is not None:
            bucket = beta.setdefault(label, {})
            bucket[record.beta] = bucket.get(record.beta, 0) + 1
    return delta, beta


def run_campaign(cfg: SearchConfig) -> CampaignResult:
    """Classify the configured tuples and verify the beta-policy subset.

    Anomalies never abort the campaign; they are counted in the summary and
    carried by the affected records.

    Args:
        cfg: Validated campaign configuration

    Returns:
        The summary and the records sorted by tuple
    """
    started = time.perf_counter()
    spec = get_field_spec(cfg.m, cfg.k)
    config_hash = cfg.config_hash()
    logger.info(f"Campaign {config_hash[:12]}: m={cfg.m}, k={cfg.k}, mode={cfg.mode.value}, seed={cfg.seed}")

    outcome = _scan(cfg, spec, converse=cfg.converse)
    quota = _add_quota(cfg, spec, outcome)
    codes = outcome.gamma_codes
    texts = [tuple_to_text(spec, tuple(int(v) for v in row)) for row in outcome.gamma_tuples]

    full = _select_full(cfg, codes)
    if spec.n > ANALYTICS_MAX_N and full.any():
        logger.warning(f"Full verdicts need n <= {ANALYTICS_MAX_N}; emitting class records only")
        full[:] = False
    beta_mode = BetaMode.SKIP if cfg.beta_policy == BetaPolicy.SKIP else BetaMode.FULL
    tasks = [
        _VerifyTask(
            m=cfg.m,
            k=cfg.k,
            c=CoefficientTuple(c0=int(r[0]), c1=int(r[1]), c2=int(r[2]), c3=int(r[3])),
            beta_mode=beta_mode,
            seed=cfg.seed,
        )
        for r in outcome.gamma_tuples[full]
    ]
    logger.info(f"Verifying {len(tasks)} of {codes.shape[0]} Gamma members (beta {beta_mode.value})")
    verified = iter(_parallel_map(_verify_tuple, tasks, cfg.threads, "verification"))

    records: List[ReportRecord] = []
    for text, code, perm, selected in zip(texts, codes.tolist(), outcome.gamma_permutation.tolist(), full.tolist()):
        verdict = VERDICT_CODES[code]
        if not selected:
            records.append(ReportRecord.light(config_hash, text, verdict, bool(perm)))
            continue
        result = next(verified)
        elapsed = result.elapsed if cfg.record_timing else None
        if result.verdict is None:
            record = ReportRecord.light(config_hash, text, verdict, bool(perm))
            record.consistent = False
            record.anomalies = record.anomalies + [Anomaly(kind="verification_error", detail=result.error or "")]
            record.elapsed_seconds = elapsed
        else:
            record = ReportRecord.from_verdict(config_hash, result.verdict, elapsed)
        records.append(record)

    summary = CampaignSummary(
        config_hash=config_hash,
        m=cfg.m,
        k=cfg.k,
        modulus_hex=format(spec.modulus, "x"),
        mode=cfg.mode,
        visited=outcome.visited,
        quota_members=quota,
        class_counts={VERDICT_CODES[i].value: int(v) for i, v in enumerate(outcome.class_counts)},
        permutation_counts={
            VERDICT_CODES[code].value: int(outcome.gamma_permutation[codes == code].sum()) for code in (1, 2)
        },
        reason_counts=_reason_counts(outcome.reason_bits),
        full_verdicts=len(tasks),
    )
    if any(r.bct_spectrum is not None for r in records):
        summary.spectra_screen = _spectra_screen(spec, records, cfg.threads)
    summary.delta_histograms, summary.beta_histograms = _histograms(records)
    summary.anomaly_count = sum(1 for r in records if not r.consistent)
    if cfg.converse:
        summary.converse = _converse_summary(cfg, spec, outcome)
        summary.permutation_counts[GammaVerdict.NOT_GAMMA.value] = summary.converse.permutations_found
        if summary.converse.passed is False:
            summary.anomaly_count += summary.converse.permutations_found
    if cfg.record_timing:
        summary.elapsed_seconds = time.perf_counter() - started

    logger.info(
        f"Campaign {config_hash[:12]} done: {summary.class_counts}, "
        f"{summary.full_verdicts} full verdicts, {summary.anomaly_count} anomalies"
    )
    return CampaignResult(summary=summary, records=records)


def write_campaign(result: CampaignResult, cfg: SearchConfig) -> None:
    """Emit records, summary and histograms to the paths in cfg.

    Records go to ``output_path`` (stdout when unset). The summary JSON goes
    to ``summary_path``, or to stdout when records were sent to a file; it is
    never mixed into a record stream on stdout.

    Raises:
        OSError: If an output file cannot be written
    """
    with JsonlWriter(cfg.output_path) as writer:
        for record in result.records:
            writer.write(record)

    summary_json = json.dumps(result.summary.record(), sort_keys=True, indent=2)
    if cfg.summary_path:
        with open(cfg.summary_path, "w", encoding="utf-8") as handle:
            handle.write(summary_json + "\n")
    elif cfg.output_path:
        sys.stdout.write(summary_json + "\n")

    if cfg.csv_path:
        write_histograms_csv(result.summary.delta_histograms, result.summary.beta_histograms, cfg.csv_path)
