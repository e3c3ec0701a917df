"""Compact multi-hash sketches of sparse vectors, per-coordinate decoders,
and explicit one-hidden-layer networks that compute sparse linear or
polynomial functions straight from a sketch."""

from .hashing import HashFamily, hash_eval, make_hash_family, make_table_family
from .sparse import SparseVector, head_tail
from .sketch import SketchMatrix, bool_sketch, count_sketch
from .decode import (decode, decode_and, decode_median, decode_min, decode_one,
                     evaluate_linear)
from .detsketch import DetSketch, decode_monomial, decode_poly, det_sketch
from .networks import (HiddenUnit, Network, SparsePolynomialModel,
                       build_bool_sketch_net, build_det_net, build_min_sketch_net,
                       build_raw_bool_net, eval_network)
from .gaussian import (GaussianProjector, build_gauss_net, gauss_estimate_coord,
                       gaussian_project, recommended_projection_dim)
from .estimators import (BoolSketchFeaturizer, CountSketchFeaturizer,
                         DetSketchFeaturizer, GaussianProjectionFeaturizer,
                         OneHiddenLayerRegressor)
from .bench import (BenchSpec, Dataset, SynthConfig, TrainConfig, featurize,
                    gen_synthetic, run_benchmark, train_one_layer)

__version__ = "0.1.0"

__all__ = [
    "HashFamily", "make_hash_family", "make_table_family", "hash_eval",
    "SparseVector", "head_tail",
    "SketchMatrix", "count_sketch", "bool_sketch",
    "decode", "decode_one", "decode_min", "decode_and", "decode_median",
    "evaluate_linear",
    "DetSketch", "det_sketch", "decode_poly", "decode_monomial",
    "Network", "HiddenUnit", "SparsePolynomialModel", "eval_network",
    "build_bool_sketch_net", "build_min_sketch_net", "build_det_net",
    "build_raw_bool_net",
    "GaussianProjector", "gaussian_project", "gauss_estimate_coord",
    "build_gauss_net", "recommended_projection_dim",
    "BoolSketchFeaturizer", "CountSketchFeaturizer", "DetSketchFeaturizer",
    "GaussianProjectionFeaturizer", "OneHiddenLayerRegressor",
    "SynthConfig", "TrainConfig", "Dataset", "BenchSpec", "gen_synthetic",
    "featurize", "train_one_layer", "run_benchmark",
]
