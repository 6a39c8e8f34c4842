"""
Difference distribution and boomerang connectivity tables.

Both BCT methods reduce to the same pair count. For a key array K and a
value array V over all x, count the ordered pairs (x, y) with K[x] = K[y]
bucketed by V[x] + V[y]:

    definitional, column b:  K[x] = F^-1(F(x) + b) + x,  V[x] = x
    LQSL, row a:             K[x] = F(x) + F(x + a),     V[x] = F(x)

Rows (or columns) are processed in blocks, optionally on a thread pool;
blocks are merged in index order so the result does not depend on the
worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import ANALYTICS_MAX_N, FULL_TABLE_MAX_N, ROW_BLOCK_SIZE
from ..errors import NotAPermutationError, PreconditionError, TheoryConsistencyError
from .table import SboxTable

logger = logging.getLogger(__name__)


class BctMethod(str, Enum):
    """How a BCT was computed."""

    DEFINITIONAL = "definitional"
    LQSL = "lqsl"


class DdtSummary(BaseModel):
    """Differential uniformity and the spectrum over all cells with a != 0."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    uniformity: int = Field(..., description="Max DDT entry over a != 0")
    spectrum: List[Tuple[int, int]] = Field(
        default_factory=list, description="[value, count] pairs sorted by value"
    )
    full_table: Optional[np.ndarray] = Field(default=None, exclude=True)


class BctSummary(BaseModel):
    """Boomerang uniformity and the spectrum over cells with a, b != 0."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    uniformity: int = Field(..., description="Max BCT entry over a, b != 0")
    spectrum: List[Tuple[int, int]] = Field(default_factory=list)
    method: BctMethod
    full_table: Optional[np.ndarray] = Field(default=None, exclude=True)


class _Tally:
    """Streaming maximum, value histogram and optional full matrix."""

    def __init__(self, size: int, keep_full: bool, skip_zero_column: bool):
        self.size = size
        self.skip_zero_column = skip_zero_column
        self.histogram = np.zeros(size + 1, dtype=np.int64)
        self.maximum = 0
        self.full = np.zeros((size, size), dtype=np.int64) if keep_full else None

    def add(self, start: int, rows: np.ndarray, transpose: bool = False) -> None:
        stop = start + rows.shape[0]
        if self.full is not None:
            if transpose:
                self.full[:, start:stop] = rows.T
            else:
                self.full[start:stop, :] = rows
        region = rows[1:] if start == 0 else rows
        if self.skip_zero_column:
            region = region[:, 1:]
        if region.size:
            self.maximum = max(self.maximum, int(region.max()))
            self.histogram += np.bincount(region.ravel(), minlength=self.size + 1)

    def spectrum(self) -> List[Tuple[int, int]]:
        values = np.flatnonzero(self.histogram)
        return [(int(v), int(self.histogram[v])) for v in values]


def _check_analyzable(t: SboxTable, keep_full: bool) -> bool:
    if t.n > ANALYTICS_MAX_N:
        raise PreconditionError(f"Table analytics are limited to n <= {ANALYTICS_MAX_N}, got n={t.n}")
    if keep_full and t.n > FULL_TABLE_MAX_N:
        logger.warning(f"Full tables are only kept for n <= {FULL_TABLE_MAX_N}; streaming instead")
        return False
    return keep_full


def _require_permutation(t: SboxTable) -> np.ndarray:
    if t.inverse is None:
        raise NotAPermutationError("The BCT is only defined for permutations")
    return t.inverse


def _blocks(
    size: int, worker: Callable[[np.ndarray], np.ndarray], threads: int
) -> Iterator[Tuple[int, np.ndarray]]:
    starts = range(0, size, ROW_BLOCK_SIZE)
    indices = [np.arange(s, min(s + ROW_BLOCK_SIZE, size), dtype=np.int64) for s in starts]
    if threads <= 1 or len(indices) == 1:
        for block in indices:
            yield int(block[0]), worker(block)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for block, rows in zip(indices, pool.map(worker, indices)):
            yield int(block[0]), rows


def _difference_block(table: np.ndarray, a_values: np.ndarray) -> np.ndarray:
    """F(x) + F(x + a) for each a in the block, shape (len(a_values), 2^n)."""
    x = np.arange(table.size, dtype=np.int64)
    return table[None, :] ^ table[x[None, :] ^ a_values[:, None]]


def _row_counts(rows: np.ndarray, size: int) -> np.ndarray:
    offsets = np.arange(rows.shape[0], dtype=np.int64)[:, None] * size
    counts = np.bincount((rows + offsets).ravel(), minlength=rows.shape[0] * size)
    return counts.reshape(rows.shape[0], size)


def pair_histogram(keys: np.ndarray, values: np.ndarray) -> np.ndarray:
    """H[d] = #{(x, y) : keys[x] = keys[y], values[x] + values[y] = d}.

    Pairs are ordered and include x = y, so H[0] >= len(keys).
    """
    size = keys.size
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    sorted_values = values[order]
    histogram = np.zeros(size, dtype=np.int64)
    histogram[0] = size
    for offset in range(1, size):
        equal = sorted_keys[:-offset] == sorted_keys[offset:]
        if not equal.any():
            break
        diffs = (sorted_values[:-offset] ^ sorted_values[offset:])[equal]
        histogram += 2 * np.bincount(diffs, minlength=size)
    return histogram


def ddt_row(t: SboxTable, a: int) -> np.ndarray:
    """DDT(a, b) for every b."""
    x = np.arange(t.size, dtype=np.int64)
    return np.bincount(t.table ^ t.table[x ^ a], minlength=t.size)


def ddt(t: SboxTable, keep_full: bool = False, threads: int = 1) -> DdtSummary:
    """Differential uniformity and spectrum.

    Args:
        t: The table
        keep_full: Keep the 2^n x 2^n matrix (n <= FULL_TABLE_MAX_N only)
        threads: Worker threads over row blocks

    Raises:
        PreconditionError: If n exceeds the analytics limit
    """
    keep_full = _check_analyzable(t, keep_full)
    tally = _Tally(t.size, keep_full, skip_zero_column=False)
    for start, rows in _blocks(
        t.size, lambda block: _row_counts(_difference_block(t.table, block), t.size), threads
    ):
        tally.add(start, rows)
    return DdtSummary(uniformity=tally.maximum, spectrum=tally.spectrum(), full_table=tally.full)


def _check_excluded_cells(full: Optional[np.ndarray], size: int) -> None:
    if full is None:
        return
    if not (np.all(full[0, :] == size) and np.all(full[:, 0] == size)):
        raise TheoryConsistencyError("BCT cells with a = 0 or b = 0 must equal 2^n")


def bct_definitional(t: SboxTable, keep_full: bool = False, threads: int = 1) -> BctSummary:
    """BCT(a, b) = #{x : F^-1(F(x) + b) + F^-1(F(x + a) + b) = a}.

    Raises:
        NotAPermutationError: If the table is not bijective
    """
    inverse = _require_permutation(t)
    keep_full = _check_analyzable(t, keep_full)
    x = np.arange(t.size, dtype=np.int64)

    def columns(b_values: np.ndarray) -> np.ndarray:
        return np.stack([pair_histogram(inverse[t.table ^ b] ^ x, x) for b in b_values])

    tally = _Tally(t.size, keep_full, skip_zero_column=True)
    for start, cols in _blocks(t.size, columns, threads):
        tally.add(start, cols, transpose=True)
    _check_excluded_cells(tally.full, t.size)
    return BctSummary(
        uniformity=tally.maximum,
        spectrum=tally.spectrum(),
        method=BctMethod.DEFINITIONAL,
        full_table=tally.full,
    )


def lqsl_row(t: SboxTable, a: int) -> np.ndarray:
    """S(a, b) = #{(x, y) : F(x+a) + F(y+a) = b and F(x) + F(y) = b} for every b.

    Raises:
        NotAPermutationError: If the table is not bijective
    """
    _require_permutation(t)
    x = np.arange(t.size, dtype=np.int64)
    return pair_histogram(t.table ^ t.table[x ^ a], t.table)


def _lqsl_rows(t: SboxTable, differences: np.ndarray) -> np.ndarray:
    return np.stack([pair_histogram(row, t.table) for row in differences])


def bct_lqsl(t: SboxTable, keep_full: bool = False, threads: int = 1) -> BctSummary:
    """BCT through the inverse-free pair count, one row per a.

    Raises:
        NotAPermutationError: If the table is not bijective
    """
    _require_permutation(t)
    keep_full = _check_analyzable(t, keep_full)
    tally = _Tally(t.size, keep_full, skip_zero_column=True)
    for start, rows in _blocks(
        t.size, lambda block: _lqsl_rows(t, _difference_block(t.table, block)), threads
    ):
        tally.add(start, rows)
    _check_excluded_cells(tally.full, t.size)
    return BctSummary(
        uniformity=tally.maximum, spectrum=tally.spectrum(), method=BctMethod.LQSL, full_table=tally.full
    )


def spectra_report(
    t: SboxTable, keep_full: bool = False, threads: int = 1
) -> Tuple[DdtSummary, BctSummary]:
    """DDT and LQSL BCT in one pass; each difference block feeds both.

    Raises:
        NotAPermutationError: If the table is not bijective
    """
    _require_permutation(t)
    keep_full = _check_analyzable(t, keep_full)

    def both(block: np.ndarray) -> np.ndarray:
        differences = _difference_block(t.table, block)
        return np.stack([_row_counts(differences, t.size), _lqsl_rows(t, differences)])

    ddt_tally = _Tally(t.size, keep_full, skip_zero_column=False)
    bct_tally = _Tally(t.size, keep_full, skip_zero_column=True)
    for start, pair in _blocks(t.size, both, threads):
        ddt_tally.add(start, pair[0])
        bct_tally.add(start, pair[1])
    _check_excluded_cells(bct_tally.full, t.size)

    ddt_summary = DdtSummary(
        uniformity=ddt_tally.maximum, spectrum=ddt_tally.spectrum(), full_table=ddt_tally.full
    )
    bct_summary = BctSummary(
        uniformity=bct_tally.maximum,
        spectrum=bct_tally.spectrum(),
        method=BctMethod.LQSL,
        full_table=bct_tally.full,
    )
    logger.debug(f"Spectra for n={t.n}: delta={ddt_summary.uniformity}, beta={bct_summary.uniformity}")
    return ddt_summary, bct_summary
