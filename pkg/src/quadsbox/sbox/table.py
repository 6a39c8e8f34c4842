"""
Lookup tables of functions on GF(2^n).
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import QuadSboxError
from ..family import CoefficientTuple, eval_f_table
from ..field import FieldSpec, element_to_hex

logger = logging.getLogger(__name__)


class ExportFormat(str, Enum):
    """On-disk table formats."""

    BINARY = "binary"
    HEX = "hex"


class SboxTable(BaseModel):
    """A function on GF(2^n) as a table indexed by element encoding.

    ``inverse`` is present exactly when the table is a bijection.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1, description="Bit width of inputs and outputs")
    table: np.ndarray = Field(..., description="table[x] = F(x)")
    inverse: Optional[np.ndarray] = Field(default=None, description="inverse[F(x)] = x")

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def bijective(self) -> bool:
        return self.inverse is not None

    @classmethod
    def from_values(cls, n: int, values: np.ndarray) -> "SboxTable":
        """Wrap a value array, computing the inverse when it is a bijection.

        Raises:
            QuadSboxError: If the array has the wrong length or range
        """
        table = np.array(values, dtype=np.int64)
        size = 1 << n
        if table.shape != (size,):
            raise QuadSboxError(f"Expected a table of length {size}, got shape {table.shape}")
        if table.min(initial=0) < 0 or table.max(initial=0) >= size:
            raise QuadSboxError(f"Table values must lie in [0, 2^{n})")

        inverse = None
        if np.unique(table).size == size:
            inverse = np.empty(size, dtype=np.int64)
            inverse[table] = np.arange(size, dtype=np.int64)
            inverse.flags.writeable = False
        table.flags.writeable = False
        return cls(n=n, table=table, inverse=inverse)

    def inverse_table(self) -> "SboxTable":
        """The compositional inverse as its own table.

        Raises:
            QuadSboxError: If the table is not bijective
        """
        if self.inverse is None:
            raise QuadSboxError("Only bijective tables have an inverse")
        return SboxTable.from_values(self.n, self.inverse)


def build_table(spec: FieldSpec, c: CoefficientTuple) -> SboxTable:
    """table[x] = f_c(x) for every x."""
    return SboxTable.from_values(spec.n, eval_f_table(spec, c))


def is_permutation(t: SboxTable) -> bool:
    """Bitset scan for bijectivity."""
    seen = np.zeros(t.size, dtype=bool)
    seen[t.table] = True
    return bool(seen.all())


def monomial_table(spec: FieldSpec, exponent: int) -> SboxTable:
    """Table of the power map x -> x^exponent."""
    return SboxTable.from_values(spec.n, spec.vpow(spec.elements(), exponent))


def identity_table(n: int) -> SboxTable:
    return SboxTable.from_values(n, np.arange(1 << n, dtype=np.int64))


def random_permutation_table(n: int, seed: int) -> SboxTable:
    """Uniform random permutation of [0, 2^n) from a Philox stream keyed by seed.

    numpy's Generator.permutation is a Fisher-Yates shuffle.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    return SboxTable.from_values(n, rng.permutation(1 << n))


def export_table(spec: FieldSpec, t: SboxTable, fmt: ExportFormat = ExportFormat.BINARY) -> bytes:
    """Serialize a table.

    Binary output is little-endian uint16 (uint32 above n = 16); hex output
    is one zero-padded element per line.
    """
    if fmt == ExportFormat.BINARY:
        dtype = "<u2" if t.n <= 16 else "<u4"
        return t.table.astype(dtype).tobytes()
    lines = [element_to_hex(spec, int(v)) for v in t.table]
    return ("\n".join(lines) + "\n").encode("ascii")
