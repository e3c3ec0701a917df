"""Multi-hash sketches: bucket sums (count) or bucket ORs (boolean).

A sketch is an m-by-t matrix; column j is the input compressed by the
j-th hash function of a family, in the spirit of the count-min structure
of Cormode & Muthukrishnan (2005).  Cell (l, j) holds the sum (or OR)
of x_i over the coordinates i with h_j(i) = l.  Both sketches are linear
projections of the input and cost O(nnz * t) to build.

The flattening convention used when a sketch is fed to a network is
column-major: cell (l, j) lands at flat position j*m + l.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hashing import HashFamily
from .sparse import SparseVector


@dataclass(frozen=True, eq=False)
class SketchMatrix:
    m: int
    t: int
    cells: np.ndarray  # shape (m, t); float sums or 0/1 bytes
    kind: str          # "count" | "bool"
    fam: HashFamily

    @property
    def is_bool(self) -> bool:
        return self.kind == "bool"

    @property
    def d(self) -> int:
        return self.fam.d

    def column(self, j: int) -> np.ndarray:
        return self.cells[:, j]

    def flatten(self) -> np.ndarray:
        """1-d view with cell (l, j) at position j*m + l."""
        return self.cells.ravel(order="F")


def count_sketch(x: SparseVector, fam: HashFamily) -> SketchMatrix:
    """Bucket sums of x under each function of the family.

    Summation within a bucket follows increasing coordinate order.
    """
    if fam.d != x.d:
        raise ValueError(f"dimension mismatch: family over {fam.d}, vector over {x.d}")
    cells = np.zeros((fam.m, fam.t))
    if x.nnz:
        buckets = fam.bucket_matrix(x.indices)
        for j in range(fam.t):
            np.add.at(cells[:, j], buckets[j], x.values)
    return SketchMatrix(m=fam.m, t=fam.t, cells=cells, kind="count", fam=fam)


def bool_sketch(x: SparseVector, fam: HashFamily) -> SketchMatrix:
    """Bucket ORs of a binary vector under each function of the family."""
    if x.flavor != "binary":
        raise ValueError(f"boolean sketch requires a binary vector, got flavor {x.flavor!r}")
    if fam.d != x.d:
        raise ValueError(f"dimension mismatch: family over {fam.d}, vector over {x.d}")
    cells = np.zeros((fam.m, fam.t), dtype=np.uint8)
    if x.nnz:
        buckets = fam.bucket_matrix(x.indices)
        for j in range(fam.t):
            cells[buckets[j], j] = 1
    return SketchMatrix(m=fam.m, t=fam.t, cells=cells, kind="bool", fam=fam)
