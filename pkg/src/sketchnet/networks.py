"""One-hidden-layer networks and their explicit constructions.

The central trick: an AND of bits b_1..b_n is ReLU(sum b_i - (n-1)), so
a ReLU unit with 0/1 incoming weights can conjoin any cell set of a
boolean sketch.  This file builds networks whose output equals a sparse
linear or polynomial function of an original vector, given only:

* its boolean multi-hash sketch (one ReLU unit per term, conjoining the
  sketch cells that the term's coordinates hash to),
* its count sketch (one min gate per weight, linear functions only),
* its deterministic polynomial-coefficient sketch (one ReLU unit per
  term computing the average poly value over the term's labels), or
* the raw 0/1 vector itself (one ReLU AND gadget per term).

Networks are stored sparsely: each hidden unit lists its input indices,
weights, bias, and nonlinearity ("relu" or "min"); the output layer is a
linear combination of unit outputs.  Trained models reuse the same
container with dense units.  There is deliberately no median unit kind:
median decoding of signed near-sparse inputs stays at the decoder level
(see ``decode.decode_median``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .hashing import HashFamily
from .sparse import SparseVector

UNIT_KINDS = ("relu", "min")


@dataclass(frozen=True, eq=False)
class HiddenUnit:
    """One hidden unit: sparse incoming weights plus a nonlinearity tag.

    ``relu`` computes max(0, w . x[indices] + bias); ``min`` computes the
    minimum of the weighted designated inputs and ignores the bias.
    """

    indices: np.ndarray
    weights: np.ndarray
    bias: float
    kind: str

    def __post_init__(self):
        if self.kind not in UNIT_KINDS:
            raise ValueError(f"unknown unit kind {self.kind!r}")
        if self.indices.shape != self.weights.shape:
            raise ValueError("indices and weights must have matching shapes")
        if self.kind == "min" and self.indices.size == 0:
            raise ValueError("min units need at least one input")

    def activate(self, x: np.ndarray) -> float:
        z = x[self.indices]
        if self.kind == "min":
            return float(np.min(self.weights * z))
        return max(0.0, float(np.dot(self.weights, z)) + self.bias)


@dataclass(frozen=True, eq=False)
class Network:
    input_dim: int
    units: tuple[HiddenUnit, ...]
    output_weights: tuple[tuple[int, float], ...]
    output_bias: float = 0.0

    def __post_init__(self):
        for u in self.units:
            if u.indices.size and (u.indices.min() < 0 or u.indices.max() >= self.input_dim):
                raise ValueError("unit references an input outside the network's input buffer")
        for j, _ in self.output_weights:
            if not 0 <= j < len(self.units):
                raise ValueError(f"output references missing hidden unit {j}")

    @property
    def n_units(self) -> int:
        return len(self.units)

    def evaluate(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.input_dim,):
            raise ValueError(f"expected input of length {self.input_dim}, got shape {x.shape}")
        acts = [u.activate(x) for u in self.units]
        out = self.output_bias
        for j, w in self.output_weights:
            out += w * acts[j]
        return float(out)

    def evaluate_batch(self, X) -> np.ndarray:
        """Evaluate many inputs at once; X has shape (n, input_dim)."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise ValueError(f"expected shape (n, {self.input_dim}), got {X.shape}")
        acts = np.empty((X.shape[0], len(self.units)))
        for u_idx, u in enumerate(self.units):
            z = X[:, u.indices]
            if u.kind == "min":
                acts[:, u_idx] = (z * u.weights).min(axis=1)
            else:
                acts[:, u_idx] = np.maximum(z @ u.weights + u.bias, 0.0)
        w = np.zeros(len(self.units))
        for j, wj in self.output_weights:
            w[j] += wj
        return acts @ w + self.output_bias

    def to_json(self) -> str:
        return json.dumps({
            "input_dim": self.input_dim,
            "units": [
                {
                    "kind": u.kind,
                    "bias": u.bias,
                    "weights": [[int(i), float(w)] for i, w in zip(u.indices, u.weights)],
                }
                for u in self.units
            ],
            "output": {
                "bias": self.output_bias,
                "weights": [[int(j), float(w)] for j, w in self.output_weights],
            },
        })

    @classmethod
    def from_json(cls, text: str) -> "Network":
        obj = json.loads(text)
        units = []
        for spec in obj["units"]:
            pairs = spec["weights"]
            units.append(HiddenUnit(
                indices=np.array([p[0] for p in pairs], dtype=np.int64),
                weights=np.array([p[1] for p in pairs], dtype=np.float64),
                bias=float(spec["bias"]),
                kind=spec["kind"],
            ))
        return cls(
            input_dim=int(obj["input_dim"]),
            units=tuple(units),
            output_weights=tuple((int(j), float(w)) for j, w in obj["output"]["weights"]),
            output_bias=float(obj["output"]["bias"]),
        )


def eval_network(net: Network, x) -> float:
    """Run the network on a dense input vector."""
    return net.evaluate(x)


@dataclass(frozen=True, eq=False)
class SparsePolynomialModel:
    """Weighted sum of monomials: g(x) = sum_j w_j * prod_{i in A_j} x_i.

    Terms hold 0-based coordinate sets; a linear model is the special
    case where every set is a singleton.
    """

    d: int
    terms: tuple[tuple[float, tuple[int, ...]], ...]

    def __post_init__(self):
        for w, A in self.terms:
            if len(A) == 0:
                raise ValueError("term index sets must be nonempty")
            if len(set(A)) != len(A):
                raise ValueError("term index sets must not repeat coordinates")
            if min(A) < 0 or max(A) >= self.d:
                raise ValueError(f"term index out of range [0, {self.d})")

    @classmethod
    def create(cls, d: int, terms: Iterable[tuple[float, Iterable[int]]]) -> "SparsePolynomialModel":
        return cls(d=d, terms=tuple((float(w), tuple(sorted(int(i) for i in A)))
                                    for w, A in terms))

    @classmethod
    def linear(cls, w: SparseVector) -> "SparsePolynomialModel":
        return cls.create(w.d, [(wi, (i,)) for i, wi in w.pairs()])

    @property
    def s(self) -> int:
        return len(self.terms)

    @property
    def is_linear(self) -> bool:
        return all(len(A) == 1 for _, A in self.terms)

    @property
    def degree(self) -> int:
        return max((len(A) for _, A in self.terms), default=0)

    def union_support(self) -> set[int]:
        out: set[int] = set()
        for _, A in self.terms:
            out.update(A)
        return out

    def evaluate(self, x) -> float:
        """Term-by-term evaluation; x is a SparseVector or dense array."""
        if isinstance(x, SparseVector):
            if x.d != self.d:
                raise ValueError(f"dimension mismatch: {x.d} vs {self.d}")
            dense = x.to_dense()
        else:
            dense = np.asarray(x, dtype=np.float64)
            if dense.shape != (self.d,):
                raise ValueError(f"expected input of length {self.d}, got {dense.shape}")
        total = 0.0
        for w, A in self.terms:
            prod = 1.0
            for i in A:
                prod *= dense[i]
            total += w * prod
        return total

    def to_json(self) -> str:
        return json.dumps({
            "d": self.d,
            "terms": [{"weight": w, "indices": list(A)} for w, A in self.terms],
        })

    @classmethod
    def from_json(cls, text: str) -> "SparsePolynomialModel":
        obj = json.loads(text)
        return cls.create(obj["d"], [(tm["weight"], tm["indices"]) for tm in obj["terms"]])


def _term_cells(A: Sequence[int], fam: HashFamily) -> list[int]:
    """Flat sketch cells hit by any coordinate of A: {j*m + h_j(i)}."""
    cells = {j * fam.m + fam.eval(j, i) for i in A for j in range(fam.t)}
    return sorted(cells)


def build_bool_sketch_net(model: SparsePolynomialModel, fam: HashFamily) -> Network:
    """Network computing the model from a flattened boolean sketch.

    One ReLU unit per term conjoins (AND gadget) every sketch cell that a
    coordinate of the term hashes to; all incoming weights are 0/1.  The
    output equals the model's value whenever every involved coordinate
    decodes correctly from the sketch.
    """
    if fam.d != model.d:
        raise ValueError(f"dimension mismatch: family over {fam.d}, model over {model.d}")
    units = []
    out_weights = []
    for w, A in model.terms:
        cells = _term_cells(A, fam)
        units.append(HiddenUnit(
            indices=np.array(cells, dtype=np.int64),
            weights=np.ones(len(cells)),
            bias=-(len(cells) - 1),
            kind="relu",
        ))
        out_weights.append((len(units) - 1, w))
    return Network(input_dim=fam.m * fam.t, units=tuple(units),
                   output_weights=tuple(out_weights))


def build_min_sketch_net(model: SparsePolynomialModel, fam: HashFamily) -> Network:
    """Network computing a *linear* model from a flattened count sketch.

    One min gate per weighted coordinate takes the minimum of the t cells
    the coordinate hashes to, which reproduces min-decoding exactly.
    """
    if not model.is_linear:
        raise ValueError("min-gate construction only covers linear models")
    if fam.d != model.d:
        raise ValueError(f"dimension mismatch: family over {fam.d}, model over {model.d}")
    totals: dict[int, float] = {}
    for w, A in model.terms:
        totals[A[0]] = totals.get(A[0], 0.0) + w
    units = []
    out_weights = []
    for i in sorted(totals):
        if totals[i] == 0.0:
            continue
        cells = [j * fam.m + fam.eval(j, i) for j in range(fam.t)]
        units.append(HiddenUnit(
            indices=np.array(cells, dtype=np.int64),
            weights=np.ones(len(cells)),
            bias=0.0,
            kind="min",
        ))
        out_weights.append((len(units) - 1, totals[i]))
    return Network(input_dim=fam.m * fam.t, units=tuple(units),
                   output_weights=tuple(out_weights))


def build_det_net(model: SparsePolynomialModel, k: int) -> Network:
    """Network computing the model from float deterministic-sketch coefficients.

    Unit j averages the sketch polynomial over the term's labels: its
    weight on coefficient c is mean(label**c), with label = index + 1.
    Output signs are guaranteed only while float evaluation stays within
    rounding distance of the exact integer decode.
    """
    if k < 0:
        raise ValueError(f"sparsity budget must be nonnegative, got {k}")
    units = []
    out_weights = []
    width = 2 * k + 1
    for w, A in model.terms:
        labels = [i + 1 for i in A]
        weights = np.array([sum(float(l) ** c for l in labels) / len(A) for c in range(width)])
        units.append(HiddenUnit(
            indices=np.arange(width, dtype=np.int64),
            weights=weights,
            bias=0.0,
            kind="relu",
        ))
        out_weights.append((len(units) - 1, w))
    return Network(input_dim=width, units=tuple(units), output_weights=tuple(out_weights))


def build_raw_bool_net(model: SparsePolynomialModel) -> Network:
    """Network computing the model directly from the raw 0/1 vector.

    One AND gadget per term: ReLU(sum of the term's coordinates minus
    (cardinality - 1)).  Exact on every binary input, any sparsity.
    """
    units = []
    out_weights = []
    for w, A in model.terms:
        units.append(HiddenUnit(
            indices=np.array(A, dtype=np.int64),
            weights=np.ones(len(A)),
            bias=-(len(A) - 1),
            kind="relu",
        ))
        out_weights.append((len(units) - 1, w))
    return Network(input_dim=model.d, units=tuple(units), output_weights=tuple(out_weights))
