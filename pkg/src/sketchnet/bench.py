"""Synthetic regression benchmark: sketches vs Gaussian projections.

Generates sparse binary regression problems whose target is a sparse
polynomial of the input plus Gaussian noise, featurizes them with raw
features, boolean multi-hash sketches, or Gaussian projections, trains
one-hidden-layer ReLU networks, and reports train/test MSE per cell of
a (task, scheme, dimension, replicate) grid as CSV.

Everything is seeded: datasets, hash families, projections and SGD all
derive their seeds from the benchmark master seed, so a rerun of the
same spec reproduces the CSV exactly (runtime column aside).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, asdict
from typing import Sequence, TextIO

import numpy as np
import scipy.sparse as sp

from .estimators import (BoolSketchFeaturizer, GaussianProjectionFeaturizer,
                         OneHiddenLayerRegressor)
from .networks import SparsePolynomialModel
from .sparse import SparseVector, format_pairs

BENCH_CSV_HEADER = "task,scheme,m,t,dim,replicate,train_mse,test_mse,runtime_s"


@dataclass(frozen=True)
class SynthConfig:
    """Knobs of the synthetic generator.

    ``relevant_size`` coordinates form the pool the polynomial's terms
    draw from; each example carries ``per_example_relevant`` of them plus
    background coordinates up to sparsity k.  Term cardinalities are
    drawn uniformly from [min_term_card, max_term_card].
    """

    d: int = 2000
    k: int = 20
    s: int = 60
    n: int = 20_000
    relevant_size: int = 20
    per_example_relevant: int = 5
    min_term_card: int = 1
    max_term_card: int = 1
    noise_sd: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.relevant_size <= self.d):
            raise ValueError("relevant pool must be nonempty and fit the dimension")
        if not (0 <= self.per_example_relevant <= self.k <= self.d):
            raise ValueError("need per_example_relevant <= k <= d")
        if not (1 <= self.min_term_card <= self.max_term_card <= 3):
            raise ValueError("term cardinalities must satisfy 1 <= min <= max <= 3")
        if self.max_term_card > self.relevant_size:
            raise ValueError("term cardinality cannot exceed the relevant pool")
        if self.s < 1 or self.n < 2:
            raise ValueError("need at least one term and two examples")
        if self.noise_sd < 0:
            raise ValueError("noise level must be nonnegative")

    @classmethod
    def paper_scale(cls, **overrides) -> "SynthConfig":
        """Full-size configuration (minutes to hours of CPU per grid cell)."""
        base = dict(d=10_000, k=50, s=300, n=200_000, relevant_size=50,
                    per_example_relevant=12, noise_sd=0.05)
        base.update(overrides)
        return cls(**base)


@dataclass(frozen=True)
class TrainConfig:
    hidden_units: int | None = None  # None: use the dataset's term count
    learning_rate: float = 0.01
    epochs: int = 30
    batch_size: int = 64
    l1_penalty: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0 or self.epochs < 1 or self.batch_size < 1:
            raise ValueError("learning rate, epochs and batch size must be positive")


@dataclass
class Dataset:
    examples: list[tuple[SparseVector, float]]
    model: SparsePolynomialModel
    train_idx: np.ndarray
    test_idx: np.ndarray
    config: SynthConfig

    @property
    def n(self) -> int:
        return len(self.examples)

    @property
    def d(self) -> int:
        return self.config.d

    def targets(self) -> np.ndarray:
        return np.array([y for _, y in self.examples])

    def to_csr(self) -> sp.csr_matrix:
        vectors = [x for x, _ in self.examples]
        indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
        for r, v in enumerate(vectors):
            indptr[r + 1] = indptr[r] + v.nnz
        indices = np.concatenate([v.indices for v in vectors])
        data = np.concatenate([v.values for v in vectors])
        return sp.csr_matrix((data, indices, indptr), shape=(len(vectors), self.d))


def _draw_support(rng: np.random.Generator, cfg: SynthConfig,
                  relevant: np.ndarray) -> np.ndarray:
    """Per-example support: relevant picks plus background, k distinct total."""
    chosen = set(rng.choice(relevant, size=cfg.per_example_relevant,
                            replace=False).tolist())
    while len(chosen) < cfg.k:
        i = int(rng.integers(cfg.d))
        if i not in chosen:  # duplicates redrawn
            chosen.add(i)
    return np.sort(np.fromiter(chosen, dtype=np.int64, count=cfg.k))


def gen_synthetic(cfg: SynthConfig) -> Dataset:
    """Draw a model, n examples, noisy targets, and a 90/10 split."""
    rng = np.random.default_rng(cfg.seed)
    relevant = np.sort(rng.choice(cfg.d, size=cfg.relevant_size, replace=False))

    terms = []
    for _ in range(cfg.s):
        card = int(rng.integers(cfg.min_term_card, cfg.max_term_card + 1))
        A = rng.choice(relevant, size=card, replace=False)
        terms.append((float(rng.standard_normal()), tuple(sorted(int(i) for i in A))))
    model = SparsePolynomialModel.create(cfg.d, terms)

    supports = np.empty((cfg.n, cfg.k), dtype=np.int64)
    for r in range(cfg.n):
        supports[r] = _draw_support(rng, cfg, relevant)

    # Term activity needs only the relevant coordinates; vectorize over them.
    pos_of = {int(i): p for p, i in enumerate(relevant)}
    present = np.zeros((cfg.n, cfg.relevant_size), dtype=bool)
    flat = supports.ravel()
    member = np.isin(flat, relevant)
    rows = np.repeat(np.arange(cfg.n), cfg.k)[member]
    cols = np.array([pos_of[int(i)] for i in flat[member]], dtype=np.int64)
    present[rows, cols] = True

    g = np.zeros(cfg.n)
    for w, A in model.terms:
        g += w * present[:, [pos_of[i] for i in A]].all(axis=1)
    noise = rng.normal(0.0, cfg.noise_sd, size=cfg.n) if cfg.noise_sd > 0 else 0.0
    targets = g + noise

    ones = np.ones(cfg.k)
    examples = [
        (SparseVector(cfg.d, supports[r], ones, "binary"), float(targets[r]))
        for r in range(cfg.n)
    ]
    perm = rng.permutation(cfg.n)
    n_train = int(round(0.9 * cfg.n))
    return Dataset(examples=examples, model=model,
                   train_idx=np.sort(perm[:n_train]), test_idx=np.sort(perm[n_train:]),
                   config=cfg)


def featurize(ds: Dataset, scheme: str, m: int | None = None, t: int | None = None,
              n_components: int | None = None, seed: int = 0,
              dtype=np.float32) -> np.ndarray:
    """Dense feature matrix for the whole dataset under one shared map.

    ``scheme`` is 'raw', 'sketch' (needs m and t) or 'gaussian' (needs
    n_components).  One hash family / projection is drawn from the seed
    and shared by every example.
    """
    X = ds.to_csr()
    if scheme == "raw":
        return X.toarray().astype(dtype)
    if scheme == "sketch":
        if not m or not t:
            raise ValueError("sketch featurization needs positive m and t")
        return BoolSketchFeaturizer(m=m, t=t, seed=seed, dtype=dtype).fit(X).transform(X)
    if scheme == "gaussian":
        if not n_components:
            raise ValueError("gaussian featurization needs a positive n_components")
        return GaussianProjectionFeaturizer(n_components=n_components, seed=seed,
                                            dtype=dtype).fit(X).transform(X)
    raise ValueError(f"unknown scheme {scheme!r}, expected raw|sketch|gaussian")


def train_one_layer(features: np.ndarray, targets: np.ndarray,
                    train_idx: np.ndarray, test_idx: np.ndarray,
                    tc: TrainConfig, hidden_units: int | None = None):
    """Fit the SGD regressor on the train rows; report train/test MSE.

    Returns (network, train_mse, test_mse).
    """
    hidden = tc.hidden_units if tc.hidden_units is not None else hidden_units
    if hidden is None:
        raise ValueError("hidden unit count not set by the config or the caller")
    reg = OneHiddenLayerRegressor(
        hidden_units=hidden, learning_rate=tc.learning_rate, epochs=tc.epochs,
        batch_size=tc.batch_size, l1_penalty=tc.l1_penalty, seed=tc.seed)
    reg.fit(features[train_idx], targets[train_idx])
    train_mse = float(np.mean((reg.predict(features[train_idx]) - targets[train_idx]) ** 2))
    test_mse = float(np.mean((reg.predict(features[test_idx]) - targets[test_idx]) ** 2))
    return reg.to_network(), train_mse, test_mse


_TASK_CARDS = {"linear": (1, 1), "polynomial": (2, 3)}


def _dataset_for_task(cfg: SynthConfig, task: str, seed: int) -> Dataset:
    if task not in _TASK_CARDS:
        raise ValueError(f"unknown task {task!r}, expected one of {sorted(_TASK_CARDS)}")
    lo, hi = _TASK_CARDS[task]
    cfg = SynthConfig(**{**asdict(cfg), "min_term_card": lo, "max_term_card": hi,
                         "seed": seed})
    return gen_synthetic(cfg)


@dataclass
class BenchSpec:
    """Grid description for ``run_benchmark``; mirrors the JSON spec file.

    Schemes are dicts: {"kind": "sketch", "t": 6}, {"kind": "gaussian"} or
    {"kind": "raw"}.  For sketches the hash size is derived per grid
    dimension as m = dim // t.
    """

    tasks: Sequence[str] = ("linear",)
    schemes: Sequence[dict] = (({"kind": "sketch", "t": 6}),)
    dims: Sequence[int] = (1000,)
    replicates: int = 1
    seed: int = 0
    synth: SynthConfig = field(default_factory=SynthConfig)
    train: TrainConfig = field(default_factory=TrainConfig)

    @classmethod
    def from_json(cls, text: str, paper_scale: bool = False) -> "BenchSpec":
        obj = json.loads(text)
        synth_kwargs = obj.get("synth", {})
        synth = (SynthConfig.paper_scale(**synth_kwargs) if paper_scale
                 else SynthConfig(**synth_kwargs))
        return cls(
            tasks=tuple(obj.get("tasks", ["linear"])),
            schemes=tuple(obj.get("schemes", [{"kind": "sketch", "t": 6}])),
            dims=tuple(obj.get("dims", [1000])),
            replicates=int(obj.get("replicates", 1)),
            seed=int(obj.get("seed", 0)),
            synth=synth,
            train=TrainConfig(**obj.get("train", {})),
        )


def _cell_seed(master: int, *parts: int) -> int:
    return int(np.random.SeedSequence((master,) + parts).generate_state(1)[0])


def run_benchmark(spec: BenchSpec, out: TextIO, log=None) -> list[dict]:
    """Run the grid, stream CSV rows to ``out``, return the rows as dicts.

    Failed cells are reported with NaN losses, and the run continues.
    Mean-over-replicates rows are appended per (task, scheme, dim) cell
    with ``replicate=mean`` and no runtime.
    """
    rows: list[dict] = []
    out.write(BENCH_CSV_HEADER + "\n")

    def emit(row: dict):
        rows.append(row)
        out.write(",".join(str(row[c]) for c in BENCH_CSV_HEADER.split(",")) + "\n")

    for task_i, task in enumerate(spec.tasks):
        datasets = [
            _dataset_for_task(spec.synth, task, seed=_cell_seed(spec.seed, task_i, rep))
            for rep in range(spec.replicates)
        ]
        hidden = spec.train.hidden_units if spec.train.hidden_units is not None \
            else spec.synth.s
        for scheme_i, scheme in enumerate(spec.schemes):
            kind = scheme["kind"]
            for dim in spec.dims:
                cell_stats = []
                for rep, ds in enumerate(datasets):
                    fseed = _cell_seed(spec.seed, task_i, scheme_i, dim, rep)
                    t0 = time.perf_counter()
                    try:
                        if kind == "sketch":
                            t = int(scheme["t"])
                            m = int(scheme.get("m") or dim // t)
                            feats = featurize(ds, "sketch", m=m, t=t, seed=fseed)
                        elif kind == "gaussian":
                            m, t = "", ""
                            feats = featurize(ds, "gaussian", n_components=dim, seed=fseed)
                        elif kind == "raw":
                            m, t = "", ""
                            feats = featurize(ds, "raw")
                        else:
                            raise ValueError(f"unknown scheme kind {kind!r}")
                        tc = TrainConfig(**{**asdict(spec.train),
                                            "seed": _cell_seed(spec.seed, 7, task_i,
                                                               scheme_i, dim, rep)})
                        _, train_mse, test_mse = train_one_layer(
                            feats, ds.targets(), ds.train_idx, ds.test_idx, tc,
                            hidden_units=hidden)
                        runtime = time.perf_counter() - t0
                        cell_stats.append((train_mse, test_mse))
                        row = dict(task=task, scheme=kind, m=m, t=t,
                                   dim=feats.shape[1], replicate=rep,
                                   train_mse=f"{train_mse:.6g}",
                                   test_mse=f"{test_mse:.6g}",
                                   runtime_s=f"{runtime:.2f}")
                    except Exception as exc:  # noqa: BLE001 - keep the grid going
                        runtime = time.perf_counter() - t0
                        if log:
                            log(f"cell failed: task={task} scheme={scheme} dim={dim} "
                                f"rep={rep}: {exc}")
                        row = dict(task=task, scheme=kind,
                                   m=scheme.get("m", ""), t=scheme.get("t", ""),
                                   dim=dim, replicate=rep, train_mse="nan",
                                   test_mse="nan", runtime_s=f"{runtime:.2f}")
                    emit(row)
                if cell_stats:
                    tr = np.mean([s[0] for s in cell_stats])
                    te = np.mean([s[1] for s in cell_stats])
                    emit(dict(task=task, scheme=kind,
                              m=row["m"], t=row["t"], dim=row["dim"],
                              replicate="mean", train_mse=f"{tr:.6g}",
                              test_mse=f"{te:.6g}", runtime_s=""))
    return rows


def dump_dataset(ds: Dataset, f: TextIO) -> None:
    """Text dump: dimension header, then one `target idx:val ...` line per example."""
    f.write(f"{ds.d}\n")
    for x, y in ds.examples:
        f.write(f"{y!r} {format_pairs(x)}\n")


def load_dataset_examples(f: TextIO) -> tuple[int, list[tuple[SparseVector, float]]]:
    """Parse the text dump back into (dimension, examples)."""
    header = f.readline()
    if not header.strip():
        raise ValueError("missing dimension header line")
    d = int(header)
    examples = []
    for line in f:
        if not line.strip():
            continue
        first, _, rest = line.partition(" ")
        pairs = []
        for tok in rest.split():
            i, _, v = tok.partition(":")
            pairs.append((int(i), float(v)))
        examples.append((SparseVector.from_pairs(d, pairs), float(first)))
    return d, examples
