"""Deterministic (2k+1)-dimensional sketch of k-sparse binary vectors.

The sketch of x is the exact integer coefficient vector of the degree-2k
polynomial

    p(z) = 1 - (k+1) * prod_{i in support(x)} (z - label(i))^2

where label(i) = i + 1 (coordinates are 0-based throughout the package;
the shift keeps 0 from being a root).  By construction p(label(i)) = 1
on the support and p(label(j)) <= -k off it, so the average of p over
any nonempty coordinate set A is 1 when all of A is in the support and
nonpositive otherwise.  A ReLU of that average therefore recovers the
monomial prod_{j in A} x_j exactly, with no randomness and no failure
probability.

Coefficients grow like (k+1) * d**(2k), so everything here is arbitrary
precision: Python ints for the sketch, ``fractions.Fraction`` for the
decoded averages.  ``DetSketch.coeffs_float`` exports a float64 copy for
feeding the sketch to numeric models; the exactness guarantee does not
survive that conversion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .sparse import SparseVector


@dataclass(frozen=True, eq=True)
class DetSketch:
    k: int
    d: int
    coeffs: tuple[int, ...]  # length 2k+1, constant term first

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.k + 1:
            raise ValueError(f"expected {2 * self.k + 1} coefficients, got {len(self.coeffs)}")

    def poly_at(self, label: int) -> int:
        """Exact value of the sketch polynomial at an integer point."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * label + c
        return acc

    def coeffs_float(self) -> np.ndarray:
        """Float64 copy of the coefficients; exact decoding is void here."""
        return np.array(self.coeffs, dtype=np.float64)

    def to_json(self) -> str:
        # Decimal strings: the coefficients routinely exceed 2**53.
        return json.dumps({"k": self.k, "d": self.d, "coeffs": [str(c) for c in self.coeffs]})

    @classmethod
    def from_json(cls, text: str) -> "DetSketch":
        obj = json.loads(text)
        return cls(k=obj["k"], d=obj["d"], coeffs=tuple(int(c) for c in obj["coeffs"]))


def det_sketch(x: SparseVector, k: int) -> DetSketch:
    """Sketch a binary vector with at most k ones into 2k+1 exact integers."""
    if x.flavor != "binary":
        raise ValueError(f"deterministic sketch requires a binary vector, got {x.flavor!r}")
    if k < 0:
        raise ValueError(f"sparsity budget must be nonnegative, got {k}")
    if x.nnz > k:
        raise ValueError(f"vector has {x.nnz} nonzeros, over the sparsity budget k={k}")
    prod = [1]  # empty product
    for i in x.indices.tolist():
        root = i + 1
        for _ in range(2):
            # multiply by (z - root)
            nxt = [0] * (len(prod) + 1)
            for deg, c in enumerate(prod):
                nxt[deg] -= root * c
                nxt[deg + 1] += c
            prod = nxt
    coeffs = [-(k + 1) * c for c in prod]
    coeffs[0] += 1
    coeffs.extend([0] * (2 * k + 1 - len(coeffs)))
    return DetSketch(k=k, d=x.d, coeffs=tuple(coeffs))


def _check_index_set(sk: DetSketch, A: Iterable[int]) -> list[int]:
    idx = sorted(set(int(i) for i in A))
    if not idx:
        raise ValueError("index set must be nonempty")
    if idx[0] < 0 or idx[-1] >= sk.d:
        raise ValueError(f"index out of range [0, {sk.d})")
    return idx


def decode_poly(sk: DetSketch, A: Iterable[int]) -> Fraction:
    """Exact average of the sketch polynomial over a coordinate set."""
    idx = _check_index_set(sk, A)
    total = sum(sk.poly_at(i + 1) for i in idx)
    return Fraction(total, len(idx))


def decode_monomial(sk: DetSketch, A: Iterable[int]) -> int:
    """Product of the sketched vector over A: ReLU sign test of decode_poly."""
    return 1 if decode_poly(sk, A) > 0 else 0
