"""Per-coordinate decoding of multi-hash sketches.

A single column decodes coordinate i as the content of i's bucket,
which overestimates x_i whenever other support collides there.  The
multi-column combiners trade that bias for an exponentially small
failure probability in t:

* ``min``    -- minimum over columns; never underestimates a nonnegative
                input and is exact unless every column has a collision.
* ``and``    -- bitwise AND over columns of a boolean sketch.
* ``median`` -- column median (mean of the middle two for even t);
                robust for inputs with signed entries.

``evaluate_linear`` applies a decoder across the support of a sparse
weight vector, costing O(nnz(w) * t).
"""

from __future__ import annotations

import numpy as np

from .sketch import SketchMatrix
from .sparse import SparseVector

DECODE_MODES = ("min", "and", "median")


def _check_coord(Y: SketchMatrix, i: int) -> None:
    if not 0 <= i < Y.d:
        raise ValueError(f"coordinate {i} out of range [0, {Y.d})")


def decode_one(Y: SketchMatrix, j: int, i: int) -> float:
    """Decode coordinate i from the single sub-sketch in column j."""
    _check_coord(Y, i)
    return float(Y.cells[Y.fam.eval(j, i), j])


def _column_decodes(Y: SketchMatrix, i: int) -> np.ndarray:
    _check_coord(Y, i)
    rows = [Y.fam.eval(j, i) for j in range(Y.t)]
    return Y.cells[rows, np.arange(Y.t)].astype(np.float64)


def decode_min(Y: SketchMatrix, i: int) -> float:
    """Minimum of the per-column decodes of coordinate i."""
    return float(_column_decodes(Y, i).min())


def decode_and(Y: SketchMatrix, i: int) -> int:
    """AND of the per-column decodes; only valid on boolean sketches."""
    if not Y.is_bool:
        raise ValueError("AND decoding requires a boolean sketch")
    return int(np.all(_column_decodes(Y, i) != 0))


def decode_median(Y: SketchMatrix, i: int) -> float:
    """Median of the per-column decodes (mean of middle two for even t)."""
    return float(np.median(_column_decodes(Y, i)))


_DECODERS = {"min": decode_min, "and": decode_and, "median": decode_median}


def decode(Y: SketchMatrix, i: int, mode: str) -> float:
    if mode not in DECODE_MODES:
        raise ValueError(f"unknown decode mode {mode!r}, expected one of {DECODE_MODES}")
    return float(_DECODERS[mode](Y, i))


def evaluate_linear(w: SparseVector, Y: SketchMatrix, mode: str) -> float:
    """Estimate the inner product of w with the sketched vector.

    Sums w_i times the decoded coordinate over the support of w only.
    """
    if w.d != Y.d:
        raise ValueError(f"dimension mismatch: weights over {w.d}, sketch over {Y.d}")
    if mode not in DECODE_MODES:
        raise ValueError(f"unknown decode mode {mode!r}, expected one of {DECODE_MODES}")
    if mode == "and" and not Y.is_bool:
        raise ValueError("AND decoding requires a boolean sketch")
    dec = _DECODERS[mode]
    total = 0.0
    for i, wi in w.pairs():
        total += wi * dec(Y, i)
    return total
