"""
The quadrinomial family f_c over GF(2^n), n = 2m.

    f_c(x) = c0 xb^(2^k+1) + c1 xb^(2^k) x + c2 xb x^(2^k) + c3 x^(2^k+1)

where xb is the conjugate x^(2^m). This module holds the coefficient and
theta types, evaluation (scalar, per-table and batched over many tuples),
the Gamma / Gamma0 / Gamma1 classification and the even-k reduction.
"""

from __future__ import annotations

import logging
from enum import Enum
from math import gcd
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import GAMMA_SAMPLER_BATCH, GAMMA_SAMPLER_MAX_ROUNDS
from ..errors import PreconditionError, QuadSboxError
from ..field import FieldSpec, tuple_from_text, tuple_to_text

logger = logging.getLogger(__name__)

# Classification reason tags
REASON_THETA1_ZERO = "theta1_zero"
REASON_TRACE_THETA4 = "trace_theta4"
REASON_THETA23_LINK = "theta23_link"
REASON_GAMMA_BRANCH = "gamma_branch"

# Bit positions used by classify_batch
REASON_BITS: Dict[str, int] = {
    REASON_THETA1_ZERO: 1,
    REASON_TRACE_THETA4: 2,
    REASON_THETA23_LINK: 4,
}


class GammaVerdict(str, Enum):
    """Membership of a coefficient tuple in the Gamma classes."""

    NOT_GAMMA = "NotGamma"
    GAMMA0 = "Gamma0"
    GAMMA1 = "Gamma1"


# Integer codes returned by classify_batch
VERDICT_CODES: Dict[int, GammaVerdict] = {
    0: GammaVerdict.NOT_GAMMA,
    1: GammaVerdict.GAMMA0,
    2: GammaVerdict.GAMMA1,
}


class CoefficientTuple(BaseModel):
    """The coefficients (c0, c1, c2, c3) of f_c."""

    model_config = ConfigDict(frozen=True)

    c0: int = Field(default=0, ge=0, description="Coefficient of xb^(2^k+1)")
    c1: int = Field(default=0, ge=0, description="Coefficient of xb^(2^k) x")
    c2: int = Field(default=0, ge=0, description="Coefficient of xb x^(2^k)")
    c3: int = Field(default=0, ge=0, description="Coefficient of x^(2^k+1)")

    def values(self) -> Tuple[int, int, int, int]:
        return self.c0, self.c1, self.c2, self.c3

    def encode(self, spec: FieldSpec) -> str:
        """Serialize as "c0:c1:c2:c3" in hex."""
        return tuple_to_text(spec, self.values())

    @classmethod
    def parse(cls, spec: FieldSpec, text: str) -> "CoefficientTuple":
        c0, c1, c2, c3 = tuple_from_text(spec, text)
        return cls(c0=c0, c1=c1, c2=c2, c3=c3)

    def index(self, n: int) -> int:
        """Position in the tuple space enumeration (c0 most significant)."""
        return (self.c0 << (3 * n)) | (self.c1 << (2 * n)) | (self.c2 << n) | self.c3

    @classmethod
    def from_index(cls, index: int, n: int) -> "CoefficientTuple":
        mask = (1 << n) - 1
        return cls(
            c0=(index >> (3 * n)) & mask,
            c1=(index >> (2 * n)) & mask,
            c2=(index >> n) & mask,
            c3=index & mask,
        )


class ThetaVector(BaseModel):
    """The four coefficient combinations that decide Gamma membership."""

    model_config = ConfigDict(frozen=True)

    t1: int
    t2: int
    t3: int
    t4: int


class GammaClass(BaseModel):
    """Classification verdict with the condition tags that decided it."""

    verdict: GammaVerdict
    reasons: List[str] = Field(default_factory=list)

    @property
    def is_gamma(self) -> bool:
        return self.verdict != GammaVerdict.NOT_GAMMA


def quadrinomial_value(spec: FieldSpec, c: CoefficientTuple, x: int, k: int) -> int:
    """Evaluate the family at x for an explicit exponent k (any parity)."""
    xb = spec.conj(x)
    xk = spec.frob(x, k)
    xbk = spec.frob(xb, k)
    return (
        spec.mul(c.c0, spec.mul(xbk, xb))
        ^ spec.mul(c.c1, spec.mul(xbk, x))
        ^ spec.mul(c.c2, spec.mul(xb, xk))
        ^ spec.mul(c.c3, spec.mul(xk, x))
    )


def eval_f(spec: FieldSpec, c: CoefficientTuple, x: int) -> int:
    """Evaluate f_c(x) with the field's own k."""
    return quadrinomial_value(spec, c, x, spec.k_reduced)


# Monomial value arrays per (field, k)
_monomial_cache: Dict[Tuple[int, int, int], Tuple[np.ndarray, ...]] = {}


def monomial_basis(spec: FieldSpec, k: Optional[int] = None) -> Tuple[np.ndarray, ...]:
    """Arrays (xb^(2^k+1), xb^(2^k) x, xb x^(2^k), x^(2^k+1)) over every x."""
    k = spec.k_reduced if k is None else k % spec.n
    key = (spec.n, spec.modulus, k)
    basis = _monomial_cache.get(key)
    if basis is None:
        x = spec.elements()
        xb = spec.vconj(x)
        xk = spec.vfrob(x, k)
        xbk = spec.vfrob(xb, k)
        basis = (
            spec.vmul(xbk, xb),
            spec.vmul(xbk, x),
            spec.vmul(xb, xk),
            spec.vmul(xk, x),
        )
        for array in basis:
            array.flags.writeable = False
        _monomial_cache[key] = basis
    return basis


def eval_f_table(spec: FieldSpec, c: CoefficientTuple, k: Optional[int] = None) -> np.ndarray:
    """Values f_c(x) for every x, indexed by the encoding of x."""
    p0, p1, p2, p3 = monomial_basis(spec, k)
    return spec.vmul(c.c0, p0) ^ spec.vmul(c.c1, p1) ^ spec.vmul(c.c2, p2) ^ spec.vmul(c.c3, p3)


def compute_thetas(spec: FieldSpec, c: CoefficientTuple) -> ThetaVector:
    """Compute (theta1, theta2, theta3, theta4).

    theta4 is c1 c1b + c2 c2b; this is the index reading under which
    theta2 theta2b + theta3 theta3b = theta4 (theta1 + theta4) holds.
    """
    c0, c1, c2, c3 = c.values()
    cb0, cb1, cb2, cb3 = (spec.conj(v) for v in (c0, c1, c2, c3))
    mul = spec.mul
    return ThetaVector(
        t1=mul(c0, cb0) ^ mul(c1, cb1) ^ mul(c2, cb2) ^ mul(c3, cb3),
        t2=mul(cb0, c1) ^ mul(cb2, c3),
        t3=mul(c0, cb2) ^ mul(c1, cb3),
        t4=mul(c1, cb1) ^ mul(c2, cb2),
    )


def classify_thetas(spec: FieldSpec, thetas: ThetaVector) -> GammaClass:
    """Classify from the theta vector alone."""
    if thetas.t1 == 0:
        return GammaClass(verdict=GammaVerdict.NOT_GAMMA, reasons=[REASON_THETA1_ZERO])

    inv1 = spec.inv(thetas.t1)
    reasons = []
    if spec.subfield_trace(spec.mul(thetas.t4, inv1)) != 1:
        reasons.append(REASON_TRACE_THETA4)
    if spec.frob_k(spec.mul(thetas.t2, inv1)) != spec.mul(spec.conj(thetas.t3), inv1):
        reasons.append(REASON_THETA23_LINK)
    if reasons:
        return GammaClass(verdict=GammaVerdict.NOT_GAMMA, reasons=reasons)

    norm2 = spec.mul(spec.mul(thetas.t2, spec.conj(thetas.t2)), spec.mul(inv1, inv1))
    branch = spec.subfield_trace(norm2)
    verdict = GammaVerdict.GAMMA1 if branch else GammaVerdict.GAMMA0
    return GammaClass(verdict=verdict, reasons=[REASON_GAMMA_BRANCH])


def classify(spec: FieldSpec, c: CoefficientTuple) -> GammaClass:
    """Classify a coefficient tuple into NotGamma, Gamma0 or Gamma1."""
    return classify_thetas(spec, compute_thetas(spec, c))


def classify_batch(
    spec: FieldSpec, c0: np.ndarray, c1: np.ndarray, c2: np.ndarray, c3: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized classify.

    Returns:
        (codes, reason_bits): codes map through VERDICT_CODES; reason_bits
        combine REASON_BITS for NotGamma rows and are 0 for Gamma rows
    """
    vmul, vconj = spec.vmul, spec.vconj
    cb0, cb1, cb2, cb3 = vconj(c0), vconj(c1), vconj(c2), vconj(c3)
    t1 = vmul(c0, cb0) ^ vmul(c1, cb1) ^ vmul(c2, cb2) ^ vmul(c3, cb3)
    t2 = vmul(cb0, c1) ^ vmul(cb2, c3)
    t3 = vmul(c0, cb2) ^ vmul(c1, cb3)
    t4 = vmul(c1, cb1) ^ vmul(c2, cb2)

    inv1 = spec.vinv(t1)
    nonzero = t1 != 0
    trace_ok = spec.vsubfield_trace(vmul(t4, inv1)) == 1
    link_ok = spec.vfrob_k(vmul(t2, inv1)) == vmul(vconj(t3), inv1)
    branch = spec.vsubfield_trace(vmul(vmul(t2, vconj(t2)), vmul(inv1, inv1)))

    gamma = nonzero & trace_ok & link_ok
    codes = np.where(gamma, 1 + branch, 0).astype(np.int8)
    reason_bits = (
        np.where(~nonzero, REASON_BITS[REASON_THETA1_ZERO], 0)
        | np.where(nonzero & ~trace_ok, REASON_BITS[REASON_TRACE_THETA4], 0)
        | np.where(nonzero & ~link_ok, REASON_BITS[REASON_THETA23_LINK], 0)
    ).astype(np.int8)
    return codes, reason_bits


def reasons_from_bits(bits: int) -> List[str]:
    return [tag for tag, bit in REASON_BITS.items() if bits & bit]


def batch_tables(
    spec: FieldSpec, c0: np.ndarray, c1: np.ndarray, c2: np.ndarray, c3: np.ndarray
) -> np.ndarray:
    """Lookup tables for many tuples at once, shape (len(c0), 2^n)."""
    p0, p1, p2, p3 = monomial_basis(spec)
    vmul = spec.vmul
    return (
        vmul(np.asarray(c0)[:, None], p0[None, :])
        ^ vmul(np.asarray(c1)[:, None], p1[None, :])
        ^ vmul(np.asarray(c2)[:, None], p2[None, :])
        ^ vmul(np.asarray(c3)[:, None], p3[None, :])
    )


def permutation_mask(tables: np.ndarray) -> np.ndarray:
    """Row-wise bijectivity test for a 2D array of lookup tables."""
    if tables.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    ordered = np.sort(tables, axis=1)
    return np.all(ordered == np.arange(tables.shape[1])[None, :], axis=1)


def sample_gamma_members(
    spec: FieldSpec,
    count: int,
    seed: int,
    verdict: Optional[GammaVerdict] = None,
) -> List[CoefficientTuple]:
    """Draw Gamma members uniformly by rejection from a seeded Philox stream.

    Args:
        spec: The field
        count: Number of tuples wanted
        seed: Philox key
        verdict: Restrict to Gamma0 or Gamma1; None accepts both

    Raises:
        QuadSboxError: If the sampler cannot find enough members
    """
    if verdict == GammaVerdict.NOT_GAMMA:
        raise PreconditionError("sample_gamma_members draws Gamma members only")
    wanted = {1, 2} if verdict is None else {1 if verdict == GammaVerdict.GAMMA0 else 2}

    rng = np.random.Generator(np.random.Philox(seed))
    members: List[CoefficientTuple] = []
    for _ in range(GAMMA_SAMPLER_MAX_ROUNDS):
        if len(members) >= count:
            break
        draws = rng.integers(0, spec.q, size=(GAMMA_SAMPLER_BATCH, 4), dtype=np.int64)
        codes, _ = classify_batch(spec, draws[:, 0], draws[:, 1], draws[:, 2], draws[:, 3])
        hits = np.isin(codes, list(wanted))
        for row in draws[hits][: count - len(members)]:
            members.append(CoefficientTuple(c0=int(row[0]), c1=int(row[1]), c2=int(row[2]), c3=int(row[3])))
    label = verdict.value if verdict is not None else "Gamma"
    if len(members) < count:
        raise QuadSboxError(
            f"Found only {len(members)} of {count} {label} members in GF(2^{spec.n})"
        )
    logger.debug(f"Sampled {count} {label} members with seed {seed}")
    return members


def even_k_reduce(spec: FieldSpec, c: CoefficientTuple, k: int) -> Tuple[CoefficientTuple, int]:
    """Rewrite an even-k tuple as an odd-k one.

    With k' = m - k (taken mod n), f_c(x)^(2^k') for exponent k equals
    f_c'(x) for exponent k' where c' = (c2, c0, c3, c1)^(2^k').
    Only the arithmetic of ``spec`` is used; its own k is ignored.

    Raises:
        PreconditionError: If k is odd or gcd(m, k) != 1
    """
    if k % 2 == 1:
        raise PreconditionError(f"even_k_reduce expects an even k, got k={k}")
    if gcd(spec.m, k) != 1:
        raise PreconditionError(f"gcd(m, k) must be 1, got gcd({spec.m}, {k})")
    k_prime = (spec.m - k) % spec.n
    reduced = CoefficientTuple(
        c0=spec.frob(c.c2, k_prime),
        c1=spec.frob(c.c0, k_prime),
        c2=spec.frob(c.c3, k_prime),
        c3=spec.frob(c.c1, k_prime),
    )
    return reduced, k_prime
