"""Dense Gaussian random projection baseline with per-coordinate decoding.

The projector maps x to Gx where G has i.i.d. N(0, 1/d') entries, d'
being the output dimension.  Coordinate i is estimated from y = Gx by
the minimum-variance linear combination of the per-row estimates
y_j / g_ji, which works out to

    est_i = <g_i, y> / ||g_i||^2        (g_i = column i of G)

The estimate is unbiased given g_i and has conditional variance
||x - x_i e_i||^2 / (d' ||g_i||^2); averaged over G that is about the
residual norm squared over d'.  ``build_gauss_net`` turns the estimator
into a one-hidden-layer ReLU network for binary inputs by pairing two
ReLUs into a soft threshold at 1/2, exact whenever every estimate lands
within 1/4 of the true bit.  Unlike the hash-sketch constructions, every
hidden unit here is dense: it touches all d' projection outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .networks import HiddenUnit, Network
from .sparse import SparseVector


@dataclass(frozen=True, eq=False)
class GaussianProjector:
    d: int
    dp: int
    seed: int
    G: np.ndarray  # shape (dp, d)

    @classmethod
    def create(cls, d: int, dp: int, seed: int) -> "GaussianProjector":
        if d < 1 or dp < 1:
            raise ValueError(f"dimensions must be positive, got d={d}, dp={dp}")
        rng = np.random.default_rng(seed)
        G = rng.normal(0.0, 1.0 / np.sqrt(dp), size=(dp, d))
        return cls(d=d, dp=dp, seed=int(seed), G=G)

    def config(self) -> dict:
        """Seed + dims; the matrix is regenerated on load."""
        return {"seed": self.seed, "d": self.d, "dp": self.dp}

    @classmethod
    def from_config(cls, cfg: dict) -> "GaussianProjector":
        return cls.create(cfg["d"], cfg["dp"], cfg["seed"])


def gaussian_project(x: SparseVector, P: GaussianProjector) -> np.ndarray:
    """y = Gx, computed over the nonzeros of x only."""
    if x.d != P.d:
        raise ValueError(f"dimension mismatch: projector over {P.d}, vector over {x.d}")
    if x.nnz == 0:
        return np.zeros(P.dp)
    return P.G[:, x.indices] @ x.values


def gauss_estimate_coord(y: np.ndarray, P: GaussianProjector, i: int) -> float:
    """Optimal linear estimate of coordinate i from y = Gx."""
    if not 0 <= i < P.d:
        raise ValueError(f"coordinate {i} out of range [0, {P.d})")
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (P.dp,):
        raise ValueError(f"expected projection of length {P.dp}, got shape {y.shape}")
    g = P.G[:, i]
    denom = float(g @ g)
    if denom == 0.0:
        raise ValueError(f"projector column {i} is identically zero")
    return float(g @ y) / denom


def recommended_projection_dim(k: int, s: int, delta: float) -> int:
    """Projection dimension at which exact recovery is reliable.

    Sized so each of the s estimates stays within 1/4 of its bit with
    probability 1 - delta/s: the per-coordinate error is roughly Gaussian
    with variance (k-1)/d', so d' = 16(k-1)ln(s/delta) puts 1/4 at a bit
    over 3 sigma.  Smaller dimensions (e.g. 4k ln(s/delta)) leave the
    threshold inside the noise and fail often.
    """
    if k < 2 or s < 1 or not 0 < delta < 1:
        raise ValueError("need k >= 2, s >= 1 and delta in (0, 1)")
    return math.ceil(16 * (k - 1) * math.log(s / delta))


def build_gauss_net(w: SparseVector, P: GaussianProjector, steepness: float = 4.0) -> Network:
    """ReLU network estimating the inner product of w with a binary input.

    Per weighted coordinate i, the linear estimate est_i feeds a pair of
    ReLUs forming a soft threshold at 1/2:

        plus  = ReLU(a*(est_i - 1/2) + 1/2)
        minus = ReLU(a*(est_i - 1/2) - 1/2)

    so plus - minus is exactly 0 when est_i <= 1/2 - 1/(2a) and exactly 1
    when est_i >= 1/2 + 1/(2a).  With the default steepness a = 4 the
    output equals the true inner product whenever every |est_i - x_i| < 1/4.
    """
    if w.d != P.d:
        raise ValueError(f"dimension mismatch: projector over {P.d}, weights over {w.d}")
    if steepness <= 0:
        raise ValueError(f"steepness must be positive, got {steepness}")
    a = float(steepness)
    units = []
    out_weights = []
    all_inputs = np.arange(P.dp, dtype=np.int64)
    for i, wi in w.pairs():
        g = P.G[:, i]
        denom = float(g @ g)
        if denom == 0.0:
            raise ValueError(f"projector column {i} is identically zero")
        est_row = a * g / denom
        units.append(HiddenUnit(indices=all_inputs, weights=est_row,
                                bias=-a / 2 + 0.5, kind="relu"))
        out_weights.append((len(units) - 1, wi))
        units.append(HiddenUnit(indices=all_inputs, weights=est_row.copy(),
                                bias=-a / 2 - 0.5, kind="relu"))
        out_weights.append((len(units) - 1, -wi))
    return Network(input_dim=P.dp, units=tuple(units), output_weights=tuple(out_weights))
