"""Monte-Carlo estimation of decoding failure rates.

Each trial draws a fresh input vector, a fresh seeded hash family, and a
target coordinate, runs the real sketch/decode pipeline, and counts a
failure when the decoded value misses the truth (exact mismatch for
binary inputs, interval miss for near-sparse real inputs).  Results
carry the matching analytic bound, exp(-t), so callers can compare the
empirical rate against it with binomial sampling slack.

Trials are independent; per-trial seeds are split off a master seed, so
a run is reproducible and could be sharded across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decode import decode_and, decode_median, decode_min, evaluate_linear
from .hashing import make_hash_family
from .networks import SparsePolynomialModel, build_bool_sketch_net
from .sketch import bool_sketch, count_sketch
from .sparse import SparseVector


@dataclass(frozen=True)
class TrialResult:
    mode: str
    t: int
    m: int
    trials: int
    failures: int
    bound: float

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    @property
    def stderr(self) -> float:
        """Binomial standard deviation of the rate at the bound value."""
        return math.sqrt(self.bound * (1.0 - self.bound) / self.trials)

    def csv_row(self) -> str:
        return (f"{self.mode},{self.t},{self.m},{self.trials},"
                f"{self.failures},{self.rate:.6g},{self.bound:.6g}")


CSV_HEADER = "mode,t,m,trials,failures,rate,bound"


def _child_seeds(seed: int, n: int) -> np.ndarray:
    return np.random.SeedSequence(seed).generate_state(n, dtype=np.uint64)


def random_binary_vector(rng: np.random.Generator, d: int, k: int) -> SparseVector:
    idx = np.sort(rng.choice(d, size=k, replace=False)).astype(np.int64)
    return SparseVector(d=d, indices=idx, values=np.ones(k), flavor="binary")


def random_nonneg_vector(rng: np.random.Generator, d: int, k: int, c: float,
                         tail_atoms: int = 10) -> SparseVector:
    """Nonnegative vector: k head entries in [1, 2), tail of l1 mass c."""
    idx = rng.choice(d, size=k + tail_atoms, replace=False)
    head_vals = rng.uniform(1.0, 2.0, size=k)
    tail_vals = np.full(tail_atoms, c / tail_atoms)
    order = np.argsort(idx)
    vals = np.concatenate([head_vals, tail_vals])[order]
    return SparseVector(d=d, indices=np.sort(idx).astype(np.int64), values=vals,
                        flavor="nonneg")


def random_real_vector(rng: np.random.Generator, d: int, k: int, c: float,
                       tail_atoms: int = 20) -> SparseVector:
    """Signed vector: k head entries of magnitude [1, 2), signed tail of l1 mass c."""
    idx = rng.choice(d, size=k + tail_atoms, replace=False)
    head_vals = rng.uniform(1.0, 2.0, size=k) * rng.choice([-1.0, 1.0], size=k)
    tail_vals = (c / tail_atoms) * rng.choice([-1.0, 1.0], size=tail_atoms)
    order = np.argsort(idx)
    vals = np.concatenate([head_vals, tail_vals])[order]
    return SparseVector(d=d, indices=np.sort(idx).astype(np.int64), values=vals,
                        flavor="real")


def random_sparse_weights(rng: np.random.Generator, d: int, s: int) -> SparseVector:
    idx = np.sort(rng.choice(d, size=s, replace=False)).astype(np.int64)
    vals = rng.standard_normal(s)
    vals[vals == 0] = 1.0
    return SparseVector(d=d, indices=idx, values=vals, flavor="real")


def binary_decode_failure_rate(mode: str, d: int, k: int, m: int, t: int,
                               trials: int, seed: int) -> TrialResult:
    """Rate of decoded-bit mismatches on random k-sparse binary vectors."""
    if mode not in ("min", "and"):
        raise ValueError(f"binary decode trials support modes 'min'/'and', got {mode!r}")
    failures = 0
    seeds = _child_seeds(seed, trials)
    for s in seeds:
        rng = np.random.default_rng(s)
        x = random_binary_vector(rng, d, k)
        fam = make_hash_family(int(rng.integers(1 << 62)), t, d, m)
        i = int(rng.integers(d))
        xi = x.get(i)
        if mode == "and":
            got = decode_and(bool_sketch(x, fam), i)
        else:
            got = decode_min(count_sketch(x, fam), i)
        failures += got != xi
    return TrialResult(mode=mode, t=t, m=m, trials=trials, failures=failures,
                       bound=math.exp(-t))


def interval_failure_rate(kind: str, d: int, k: int, m: int, t: int, trials: int,
                          seed: int, epsilon: float, c: float) -> TrialResult:
    """Rate of interval misses for near-sparse inputs.

    ``kind='nonneg'`` min-decodes and fails when the estimate leaves
    [x_i, x_i + eps*c]; ``kind='real'`` median-decodes and fails when it
    leaves [x_i - eps*c, x_i + eps*c].
    """
    if kind not in ("nonneg", "real"):
        raise ValueError(f"kind must be 'nonneg' or 'real', got {kind!r}")
    failures = 0
    seeds = _child_seeds(seed, trials)
    for s in seeds:
        rng = np.random.default_rng(s)
        if kind == "nonneg":
            x = random_nonneg_vector(rng, d, k, c)
        else:
            x = random_real_vector(rng, d, k, c)
        fam = make_hash_family(int(rng.integers(1 << 62)), t, d, m)
        i = int(rng.integers(d))
        xi = x.get(i)
        Y = count_sketch(x, fam)
        if kind == "nonneg":
            got = decode_min(Y, i)
            bad = not (xi <= got <= xi + epsilon * c)
        else:
            got = decode_median(Y, i)
            bad = not (xi - epsilon * c <= got <= xi + epsilon * c)
        failures += bad
    mode = "min" if kind == "nonneg" else "median"
    return TrialResult(mode=mode, t=t, m=m, trials=trials, failures=failures,
                       bound=math.exp(-t))


def linear_eval_failure_rate(d: int, k: int, m: int, s: int, delta: float,
                             trials: int, seed: int, mode: str = "and") -> TrialResult:
    """Rate of exact mismatches of decoded sparse inner products.

    Uses t = ceil(ln(s/delta)) hash functions, under which a union bound
    over the weight support gives failure probability at most delta.
    """
    if mode not in ("min", "and"):
        raise ValueError(f"linear eval trials support modes 'min'/'and', got {mode!r}")
    t = math.ceil(math.log(s / delta))
    failures = 0
    seeds = _child_seeds(seed, trials)
    for sd in seeds:
        rng = np.random.default_rng(sd)
        x = random_binary_vector(rng, d, k)
        w = random_sparse_weights(rng, d, s)
        fam = make_hash_family(int(rng.integers(1 << 62)), t, d, m)
        Y = bool_sketch(x, fam) if mode == "and" else count_sketch(x, fam)
        got = evaluate_linear(w, Y, mode)
        truth = sum(wi * x.get(i) for i, wi in w.pairs())
        failures += not math.isclose(got, truth, rel_tol=0.0, abs_tol=1e-9)
    return TrialResult(mode=mode, t=t, m=m, trials=trials, failures=failures, bound=delta)


@dataclass(frozen=True)
class NetTrialResult:
    t: int
    m: int
    trials: int
    failures: int
    bound: float
    decode_ok_trials: int
    decode_ok_exact: int
    """Trials where every involved coordinate decoded correctly, and how
    many of those matched the true value bit-for-bit."""

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    @property
    def stderr(self) -> float:
        return math.sqrt(self.bound * (1.0 - self.bound) / self.trials)


def sketch_net_failure_rate(d: int, k: int, m: int, s: int, delta: float,
                            trials: int, seed: int) -> NetTrialResult:
    """End-to-end: does the constructed network reproduce the inner product?

    Per trial, a random sparse weight vector becomes a network over the
    boolean sketch; failure means the network output differs from the
    true inner product.  Trials where every weighted coordinate decodes
    correctly are tracked separately: on those the match must be exact.
    """
    t = math.ceil(math.log(s / delta))
    failures = 0
    ok_trials = 0
    ok_exact = 0
    seeds = _child_seeds(seed, trials)
    for sd in seeds:
        rng = np.random.default_rng(sd)
        x = random_binary_vector(rng, d, k)
        w = random_sparse_weights(rng, d, s)
        fam = make_hash_family(int(rng.integers(1 << 62)), t, d, m)
        Y = bool_sketch(x, fam)
        net = build_bool_sketch_net(SparsePolynomialModel.linear(w), fam)
        got = net.evaluate(Y.flatten())
        truth = 0.0
        for i, wi in w.pairs():
            truth += wi * x.get(i)
        failures += not math.isclose(got, truth, rel_tol=0.0, abs_tol=1e-9)
        if all(decode_and(Y, i) == x.get(i) for i, _ in w.pairs()):
            ok_trials += 1
            ok_exact += got == truth
    return NetTrialResult(t=t, m=m, trials=trials, failures=failures, bound=delta,
                          decode_ok_trials=ok_trials, decode_ok_exact=ok_exact)
