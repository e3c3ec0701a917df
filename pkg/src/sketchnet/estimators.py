"""Scikit-learn style estimators wrapping the sketching primitives.

The featurizers are stateless in the data and random in the map: ``fit``
draws the hash family or projection matrix from the seed and records the
input dimension, ``transform`` maps rows to dense feature blocks.  They
accept scipy CSR/CSC matrices, dense arrays, or sequences of
``SparseVector`` and compose with sklearn pipelines (``get_params``,
``fit_transform``, cloning) as usual.

``OneHiddenLayerRegressor`` is a deterministic mini-batch SGD trainer
for a single ReLU hidden layer under squared loss, with optional l1
proximal shrinkage on the first-layer weights (weights step, then
soft-threshold).  ``hidden_units=0`` trains a plain linear model.  Given
the same seed and data it reproduces bit-identical parameters: fixed
uniform(+-1/sqrt(fan_in)) init, seeded batch shuffling, no other state.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from .detsketch import det_sketch
from .gaussian import GaussianProjector
from .hashing import make_hash_family
from .networks import HiddenUnit, Network
from .sparse import SparseVector


def _as_csr(X, expected_d: int | None = None) -> sp.csr_matrix:
    """Coerce supported input forms to CSR float64."""
    if isinstance(X, SparseVector):
        X = [X]
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], SparseVector):
        d = X[0].d
        indptr = np.zeros(len(X) + 1, dtype=np.int64)
        for r, v in enumerate(X):
            if v.d != d:
                raise ValueError("all vectors must share one dimension")
            indptr[r + 1] = indptr[r] + v.nnz
        indices = np.concatenate([v.indices for v in X]) if len(X) else np.array([], dtype=np.int64)
        data = np.concatenate([v.values for v in X]) if len(X) else np.array([])
        out = sp.csr_matrix((data, indices, indptr), shape=(len(X), d))
    elif sp.issparse(X):
        out = X.tocsr().astype(np.float64)
    else:
        arr = np.asarray(X, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d input, got shape {arr.shape}")
        out = sp.csr_matrix(arr)
    if expected_d is not None and out.shape[1] != expected_d:
        raise ValueError(f"expected {expected_d} input features, got {out.shape[1]}")
    return out


class _SketchFeaturizerBase(TransformerMixin, BaseEstimator):
    kind = "bool"

    def __init__(self, m=64, t=4, seed=0, dtype=np.float64):
        self.m = m
        self.t = t
        self.seed = seed
        self.dtype = dtype

    def fit(self, X, y=None):
        X = _as_csr(X)
        self.n_features_in_ = X.shape[1]
        self.family_ = make_hash_family(self.seed, self.t, self.n_features_in_, self.m)
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "family_"):
            raise NotFittedError("call fit before transform")
        X = _as_csr(X, self.n_features_in_)
        n = X.shape[0]
        m, t = self.m, self.t
        out = np.zeros((n, m * t), dtype=self.dtype)
        nnz_per_row = np.diff(X.indptr)
        rows = np.repeat(np.arange(n), nnz_per_row)
        if X.indices.size:
            buckets = self.family_.bucket_matrix(X.indices)
            for j in range(t):
                cols = j * m + buckets[j]
                if self.kind == "bool":
                    out[rows, cols] = 1
                else:
                    np.add.at(out, (rows, cols), X.data)
        return out


class BoolSketchFeaturizer(_SketchFeaturizerBase):
    """Rows become flattened boolean sketches of shape m*t (OR buckets)."""

    kind = "bool"

    def fit(self, X, y=None):
        X = _as_csr(X)
        if X.data.size and not np.all(X.data == 1):
            raise ValueError("boolean sketching requires 0/1 inputs")
        return super().fit(X)


class CountSketchFeaturizer(_SketchFeaturizerBase):
    """Rows become flattened count sketches of shape m*t (summed buckets)."""

    kind = "count"


class GaussianProjectionFeaturizer(TransformerMixin, BaseEstimator):
    """Rows become dense Gaussian projections of dimension n_components.

    Matrix entries are i.i.d. N(0, 1/n_components), regenerated from the
    seed, so persisting (seed, dims) is enough to reproduce the map.
    """

    def __init__(self, n_components=100, seed=0, dtype=np.float64):
        self.n_components = n_components
        self.seed = seed
        self.dtype = dtype

    def fit(self, X, y=None):
        X = _as_csr(X)
        self.n_features_in_ = X.shape[1]
        self.projector_ = GaussianProjector.create(self.n_features_in_,
                                                   self.n_components, self.seed)
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "projector_"):
            raise NotFittedError("call fit before transform")
        X = _as_csr(X, self.n_features_in_)
        return np.asarray(X @ self.projector_.G.T, dtype=self.dtype)


class DetSketchFeaturizer(TransformerMixin, BaseEstimator):
    """Rows become float copies of the 2k+1 deterministic sketch coefficients.

    Rows must be binary with at most k nonzeros.  The float export loses
    the exact-decoding guarantee of the integer sketch; it exists so the
    sketch can feed trained models.
    """

    def __init__(self, k=8):
        self.k = k

    def fit(self, X, y=None):
        X = _as_csr(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "n_features_in_"):
            raise NotFittedError("call fit before transform")
        X = _as_csr(X, self.n_features_in_)
        out = np.empty((X.shape[0], 2 * self.k + 1))
        for r in range(X.shape[0]):
            idx = X.indices[X.indptr[r]:X.indptr[r + 1]]
            vals = X.data[X.indptr[r]:X.indptr[r + 1]]
            if not np.all(vals == 1):
                raise ValueError("deterministic sketching requires 0/1 inputs")
            x = SparseVector(self.n_features_in_, np.sort(idx).astype(np.int64),
                             np.ones(idx.size), "binary")
            out[r] = det_sketch(x, self.k).coeffs_float()
        return out


class OneHiddenLayerRegressor(RegressorMixin, BaseEstimator):
    """Mini-batch SGD for a one-hidden-layer ReLU regressor (squared loss).

    Parameters
    ----------
    hidden_units : int
        Width of the ReLU layer; 0 trains a plain linear model.
    learning_rate, epochs, batch_size : SGD schedule (constant rate).
    l1_penalty : float
        Proximal soft-threshold applied to first-layer weights each step.
    seed : int
        Drives both the init and the per-epoch batch shuffles.
    """

    def __init__(self, hidden_units=64, learning_rate=0.01, epochs=30,
                 batch_size=64, l1_penalty=0.0, seed=0):
        self.hidden_units = hidden_units
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.l1_penalty = l1_penalty
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X)
        if X.dtype not in (np.float32, np.float64):
            X = X.astype(np.float64)
        y = np.asarray(y, dtype=X.dtype)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise ValueError(f"inconsistent shapes: X {X.shape}, y {y.shape}")
        if self.learning_rate <= 0 or self.epochs < 1 or self.batch_size < 1:
            raise ValueError("learning rate, epochs and batch size must be positive")
        n, p = X.shape
        h = int(self.hidden_units)
        rng = np.random.default_rng(self.seed)
        dt = X.dtype
        lim1 = 1.0 / np.sqrt(p)
        if h > 0:
            W1 = rng.uniform(-lim1, lim1, size=(p, h)).astype(dt)
            b1 = np.zeros(h, dtype=dt)
            lim2 = 1.0 / np.sqrt(h)
            w2 = rng.uniform(-lim2, lim2, size=h).astype(dt)
        else:
            W1 = rng.uniform(-lim1, lim1, size=p).astype(dt)
            b1 = None
            w2 = None
        b2 = dt.type(0.0)

        lr = dt.type(self.learning_rate)
        shrink = dt.type(self.learning_rate * self.l1_penalty)
        losses = []
        for epoch in range(self.epochs):
            order = rng.permutation(n)
            sq_sum = 0.0
            for start in range(0, n, self.batch_size):
                idx = order[start:start + self.batch_size]
                Xb = X[idx]
                yb = y[idx]
                bsz = idx.size
                if h > 0:
                    Z = Xb @ W1 + b1
                    H = np.maximum(Z, 0)
                    pred = H @ w2 + b2
                    g_pred = (2.0 / bsz) * (pred - yb)
                    g_w2 = H.T @ g_pred
                    g_b2 = g_pred.sum()
                    g_H = np.outer(g_pred, w2)
                    g_H[Z <= 0] = 0
                    g_W1 = Xb.T @ g_H
                    g_b1 = g_H.sum(axis=0)
                    W1 -= lr * g_W1
                    b1 -= lr * g_b1
                    w2 -= lr * g_w2
                    b2 -= lr * g_b2
                else:
                    pred = Xb @ W1 + b2
                    g_pred = (2.0 / bsz) * (pred - yb)
                    W1 -= lr * (Xb.T @ g_pred)
                    b2 -= lr * g_pred.sum()
                if shrink > 0:
                    W1 = np.sign(W1) * np.maximum(np.abs(W1) - shrink, 0)
                sq_sum += float(((pred - yb) ** 2).sum())
            loss = sq_sum / n
            if not np.isfinite(loss):
                raise RuntimeError(f"training diverged at epoch {epoch}: loss={loss}")
            losses.append(loss)

        self.n_features_in_ = p
        self.W1_ = W1
        self.b1_ = b1
        self.w2_ = w2
        self.b2_ = float(b2)
        self.loss_curve_ = losses
        return self

    def _check_fitted(self):
        if not hasattr(self, "W1_"):
            raise NotFittedError("call fit before predict")

    def predict(self, X) -> np.ndarray:
        self._check_fitted()
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected shape (n, {self.n_features_in_}), got {X.shape}")
        if self.hidden_units > 0:
            H = np.maximum(X @ self.W1_ + self.b1_, 0)
            return np.asarray(H @ self.w2_ + self.b2_, dtype=np.float64)
        return np.asarray(X @ self.W1_ + self.b2_, dtype=np.float64)

    def to_network(self) -> Network:
        """Export the trained model in the shared network container.

        A linear model is expressed with two mirrored ReLU units, using
        z = relu(z) - relu(-z).
        """
        self._check_fitted()
        p = self.n_features_in_
        all_inputs = np.arange(p, dtype=np.int64)
        if self.hidden_units > 0:
            units = tuple(
                HiddenUnit(indices=all_inputs, weights=self.W1_[:, u].astype(np.float64),
                           bias=float(self.b1_[u]), kind="relu")
                for u in range(self.hidden_units)
            )
            out = tuple((u, float(self.w2_[u])) for u in range(self.hidden_units))
            return Network(input_dim=p, units=units, output_weights=out,
                           output_bias=self.b2_)
        w = self.W1_.astype(np.float64)
        units = (
            HiddenUnit(indices=all_inputs, weights=w, bias=0.0, kind="relu"),
            HiddenUnit(indices=all_inputs, weights=-w, bias=0.0, kind="relu"),
        )
        return Network(input_dim=p, units=units,
                       output_weights=((0, 1.0), (1, -1.0)), output_bias=self.b2_)
