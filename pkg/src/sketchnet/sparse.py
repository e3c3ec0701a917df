"""Sparse vectors: index/value pairs over a fixed dimension.

Three flavors are tracked so downstream operations can validate their
preconditions cheaply: ``binary`` (all values exactly 1), ``nonneg``
(all values > 0), and ``real`` (anything nonzero).  Indices are 0-based,
strictly increasing and unique.

Also provides the best k-sparse approximation split (``head_tail``) and
a small libsvm-style text format (dimension header line, then one
``index:value`` pair list per vector).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

import numpy as np

FLAVORS = ("binary", "nonneg", "real")


@dataclass(frozen=True, eq=False)
class SparseVector:
    d: int
    indices: np.ndarray
    values: np.ndarray
    flavor: str

    def __post_init__(self):
        if self.d < 0:
            raise ValueError(f"dimension must be nonnegative, got {self.d}")
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        idx, val = self.indices, self.values
        if idx.shape != val.shape or idx.ndim != 1:
            raise ValueError("indices and values must be 1-d arrays of equal length")
        if idx.size:
            if idx[0] < 0 or idx[-1] >= self.d:
                raise ValueError("index out of range")
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing")
            if np.any(val == 0):
                raise ValueError("explicit zeros are not allowed")
            if self.flavor == "binary" and np.any(val != 1):
                raise ValueError("binary vectors must have all values equal to 1")
            if self.flavor == "nonneg" and np.any(val <= 0):
                raise ValueError("nonneg vectors must have strictly positive values")

    @classmethod
    def from_pairs(cls, d: int, pairs: Iterable[tuple[int, float]],
                   flavor: str | None = None) -> "SparseVector":
        """Build from (index, value) pairs; zeros are dropped, order is free."""
        pairs = [(int(i), float(v)) for i, v in pairs if v != 0]
        pairs.sort()
        idx = np.array([i for i, _ in pairs], dtype=np.int64)
        val = np.array([v for _, v in pairs], dtype=np.float64)
        return cls(d=d, indices=idx, values=val, flavor=flavor or _infer_flavor(val))

    @classmethod
    def binary(cls, d: int, support: Iterable[int]) -> "SparseVector":
        idx = np.unique(np.asarray(list(support), dtype=np.int64))
        return cls(d=d, indices=idx, values=np.ones(idx.size), flavor="binary")

    @classmethod
    def from_dense(cls, arr, flavor: str | None = None) -> "SparseVector":
        arr = np.asarray(arr, dtype=np.float64)
        idx = np.nonzero(arr)[0].astype(np.int64)
        val = arr[idx]
        return cls(d=arr.size, indices=idx, values=val, flavor=flavor or _infer_flavor(val))

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    @property
    def support(self) -> np.ndarray:
        return self.indices

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.d)
        out[self.indices] = self.values
        return out

    def get(self, i: int) -> float:
        if not 0 <= i < self.d:
            raise ValueError(f"coordinate {i} out of range [0, {self.d})")
        pos = np.searchsorted(self.indices, i)
        if pos < self.indices.size and self.indices[pos] == i:
            return float(self.values[pos])
        return 0.0

    def pairs(self) -> Iterator[tuple[int, float]]:
        return zip(self.indices.tolist(), self.values.tolist())

    def dot(self, other: "SparseVector") -> float:
        """Inner product with another sparse vector of the same dimension."""
        if other.d != self.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")
        common, ia, ib = np.intersect1d(self.indices, other.indices,
                                        assume_unique=True, return_indices=True)
        del common
        return float(np.dot(self.values[ia], other.values[ib]))


def _infer_flavor(values: np.ndarray) -> str:
    if values.size == 0 or np.all(values == 1):
        return "binary"
    if np.all(values > 0):
        return "nonneg"
    return "real"


def head_tail(x: SparseVector, k: int) -> tuple[SparseVector, SparseVector]:
    """Split x into its best k-sparse l1 approximation and the residue.

    The head keeps the k entries of largest magnitude; magnitude ties are
    broken toward the lowest index so the split is deterministic.  The two
    parts always add back to x exactly.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    n = x.nnz
    if k >= n:
        empty = SparseVector(x.d, np.array([], dtype=np.int64), np.array([]), x.flavor)
        return x, empty
    # lexsort: last key is primary, so order by (-|v|, index).
    order = np.lexsort((x.indices, -np.abs(x.values)))
    head_pos = np.sort(order[:k])
    tail_pos = np.sort(order[k:])
    head = SparseVector(x.d, x.indices[head_pos].copy(), x.values[head_pos].copy(), x.flavor)
    tail = SparseVector(x.d, x.indices[tail_pos].copy(), x.values[tail_pos].copy(), x.flavor)
    return head, tail


def _format_value(v: float) -> str:
    return str(int(v)) if v == int(v) else repr(v)


def format_pairs(x: SparseVector) -> str:
    return " ".join(f"{i}:{_format_value(v)}" for i, v in x.pairs())


def parse_pairs(d: int, text: str, flavor: str | None = None) -> SparseVector:
    pairs = []
    for tok in text.split():
        i, _, v = tok.partition(":")
        if not _:
            raise ValueError(f"malformed pair {tok!r}, expected index:value")
        pairs.append((int(i), float(v)))
    return SparseVector.from_pairs(d, pairs, flavor=flavor)


def dump_vector(x: SparseVector, f: TextIO) -> None:
    """Write the text form: a dimension header line, then the pair list."""
    f.write(f"{x.d}\n")
    f.write(format_pairs(x) + "\n")


def load_vector(f: TextIO, flavor: str | None = None) -> SparseVector:
    header = f.readline()
    if not header.strip():
        raise ValueError("missing dimension header line")
    d = int(header)
    return parse_pairs(d, f.readline(), flavor=flavor)
