"""Seeded pairwise-independent hash families mapping [0, d) -> [0, m).

Functions are affine maps over the prime field GF(p) with p = 2**61 - 1,
reduced modulo the range size:

    h_j(i) = ((a_j * i + b_j) mod p) mod m,  a_j in [1, p), b_j in [0, p)

This is the classic Carter & Wegman (1979) construction: for any fixed
pair of distinct inputs, the pair of hash values is (nearly) uniform over
[0, m)^2, so collisions happen with probability ~1/m.  The final mod-m
reduction is slightly non-uniform, but the bias is of order m/p and p is
a 61-bit Mersenne prime, so it is far below anything observable.

Families are drawn from a seeded generator: the tuple (seed, t, d, m)
pins a family exactly, and growing t under the same seed extends the
family without changing the functions already drawn.  That keeps sweeps
over t comparable.  Explicit lookup-table families are also supported so
hand-worked examples and unit tests can be bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PRIME = (1 << 61) - 1

_LOW30 = (1 << 30) - 1
_LOW31 = (1 << 31) - 1


def _mod_p(x: np.ndarray) -> np.ndarray:
    """Reduce uint64 values (< 2**63) modulo the Mersenne prime 2**61 - 1."""
    x = (x & PRIME) + (x >> np.uint64(61))
    return np.where(x >= PRIME, x - PRIME, x)


def _mul_mod_p(a: int, x: np.ndarray) -> np.ndarray:
    """(a * x) mod (2**61 - 1) for uint64 arrays, without 128-bit ints.

    Splits both operands into 30/31-bit halves so every partial product
    fits in a uint64, then folds the powers of two back using
    2**61 == 1 (mod p).
    """
    a = int(a)
    a_hi, a_lo = a >> 31, a & _LOW31
    x = x.astype(np.uint64, copy=False)
    x_hi = x >> np.uint64(31)
    x_lo = x & np.uint64(_LOW31)

    # a*x = (a_hi*x_hi) * 2^62 + (a_hi*x_lo + a_lo*x_hi) * 2^31 + a_lo*x_lo
    hh = _mod_p(np.uint64(a_hi) * x_hi)          # < p
    hh = _mod_p(hh << np.uint64(1))              # * 2^62 == * 2
    mid = _mod_p(np.uint64(a_hi) * x_lo + np.uint64(a_lo) * x_hi)
    mid = _mod_p(((mid & np.uint64(_LOW30)) << np.uint64(31)) + (mid >> np.uint64(30)))
    low = _mod_p(np.uint64(a_lo) * x_lo)
    return _mod_p(hh + mid + low)


@dataclass(frozen=True, eq=False)
class HashFamily:
    """t hash functions [0, d) -> [0, m), affine or table-backed.

    Affine families carry per-function coefficients ``a`` (nonzero) and
    ``b`` over GF(2**61 - 1) plus the seed they were drawn from.  Table
    families carry an explicit (t, d) lookup array and have ``seed=None``.
    Instances are immutable and safe to share across threads.
    """

    t: int
    d: int
    m: int
    a: np.ndarray | None = None
    b: np.ndarray | None = None
    tables: np.ndarray | None = None
    seed: int | None = None

    @property
    def is_affine(self) -> bool:
        return self.tables is None

    def eval(self, j: int, i: int) -> int:
        """Value of the j-th function at coordinate i."""
        if not 0 <= j < self.t:
            raise ValueError(f"function index {j} out of range [0, {self.t})")
        if not 0 <= i < self.d:
            raise ValueError(f"coordinate {i} out of range [0, {self.d})")
        if self.tables is not None:
            return int(self.tables[j, i])
        # Exact big-int arithmetic; the vectorized path below must agree.
        return ((int(self.a[j]) * i + int(self.b[j])) % PRIME) % self.m

    def eval_many(self, j: int, indices: np.ndarray) -> np.ndarray:
        """Vectorized ``eval`` of function j over an index array."""
        if not 0 <= j < self.t:
            raise ValueError(f"function index {j} out of range [0, {self.t})")
        indices = np.asarray(indices)
        if indices.size and (indices.min() < 0 or indices.max() >= self.d):
            raise ValueError("coordinate out of range")
        if self.tables is not None:
            return self.tables[j, indices].astype(np.int64)
        v = _mod_p(_mul_mod_p(int(self.a[j]), indices.astype(np.uint64)) + np.uint64(self.b[j]))
        return (v % np.uint64(self.m)).astype(np.int64)

    def bucket_matrix(self, indices: np.ndarray) -> np.ndarray:
        """Buckets of every function at every index, shape (t, len(indices))."""
        indices = np.asarray(indices)
        return np.stack([self.eval_many(j, indices) for j in range(self.t)])

    def config(self) -> dict:
        """JSON-friendly description; only seeded affine families qualify."""
        if self.seed is None:
            raise ValueError("only seeded affine families can be serialized as a config")
        return {"seed": self.seed, "t": self.t, "d": self.d, "m": self.m}

    @classmethod
    def from_config(cls, cfg: dict) -> "HashFamily":
        return make_hash_family(cfg["seed"], cfg["t"], cfg["d"], cfg["m"])


def make_hash_family(seed: int, t: int, d: int, m: int) -> HashFamily:
    """Draw t affine hash functions [0, d) -> [0, m) from a seeded generator.

    Coefficient pairs are drawn per function (a_j first, then b_j), so the
    first t functions of a (seed, t', d, m) family with t' > t coincide
    with the (seed, t, d, m) family.
    """
    if t < 1:
        raise ValueError(f"need at least one hash function, got t={t}")
    if d < 1 or m < 1:
        raise ValueError(f"domain and range must be nonempty, got d={d}, m={m}")
    if d > PRIME or m > PRIME:
        raise ValueError("domain/range size does not fit in the 61-bit field")
    rng = np.random.default_rng(seed)
    draws = rng.integers(low=[1, 0], high=[PRIME, PRIME], size=(t, 2), dtype=np.uint64)
    return HashFamily(t=t, d=d, m=m, a=draws[:, 0].copy(), b=draws[:, 1].copy(), seed=int(seed))


def make_table_family(tables, m: int | None = None) -> HashFamily:
    """Build a family from explicit lookup tables (one length-d table per function).

    ``m`` defaults to 1 + the largest entry.  Intended for bit-exact tests.
    """
    arr = np.asarray(tables, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("expected a nonempty list of equal-length nonempty tables")
    if arr.min() < 0:
        raise ValueError("table entries must be nonnegative")
    if m is None:
        m = int(arr.max()) + 1
    elif arr.max() >= m:
        raise ValueError(f"table entry {int(arr.max())} out of range [0, {m})")
    t, d = arr.shape
    return HashFamily(t=t, d=d, m=int(m), tables=arr)


def hash_eval(fam: HashFamily, j: int, i: int) -> int:
    """Bucket of coordinate i under the j-th function of the family."""
    return fam.eval(j, i)
