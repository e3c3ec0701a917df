"""Command-line front end.

Subcommands:
  sketch      sketch a sparse vector from its text file
  montecarlo  estimate decoding failure rates against the analytic bound
  build-net   construct a network computing a model file's polynomial
  gen         generate and dump a synthetic dataset
  bench       run a benchmark spec grid and write the CSV report
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench as bench_mod
from . import montecarlo as mc
from .hashing import make_hash_family
from .networks import (SparsePolynomialModel, build_bool_sketch_net,
                       build_det_net, build_min_sketch_net, build_raw_bool_net)
from .sketch import bool_sketch, count_sketch
from .sparse import load_vector


def _open_out(path: str | None):
    return open(path, "w") if path else sys.stdout


def _cmd_sketch(args) -> int:
    with open(args.input) as f:
        x = load_vector(f)
    fam = make_hash_family(args.seed, args.t, x.d, args.m)
    Y = bool_sketch(x, fam) if args.kind == "bool" else count_sketch(x, fam)
    payload = {
        "kind": Y.kind,
        "m": Y.m,
        "t": Y.t,
        "family": fam.config(),
        "cells": Y.cells.tolist(),
    }
    with _open_out(args.out) as f:
        json.dump(payload, f)
        f.write("\n")
    return 0


def _cmd_montecarlo(args) -> int:
    if args.mode == "median" or (args.mode == "min" and args.epsilon is not None):
        if args.epsilon is None or args.c is None:
            raise SystemExit("interval trials need both --epsilon and --c")
        kind = "real" if args.mode == "median" else "nonneg"
        res = mc.interval_failure_rate(kind, args.d, args.k, args.m, args.t,
                                       args.trials, args.seed,
                                       epsilon=args.epsilon, c=args.c)
    else:
        res = mc.binary_decode_failure_rate(args.mode, args.d, args.k, args.m,
                                            args.t, args.trials, args.seed)
    with _open_out(args.out) as f:
        f.write(mc.CSV_HEADER + "\n")
        f.write(res.csv_row() + "\n")
    return 0


def _cmd_build_net(args) -> int:
    with open(args.model) as f:
        model = SparsePolynomialModel.from_json(f.read())
    if args.construction in ("bool", "min"):
        if not args.m or not args.t:
            raise SystemExit("sketch constructions need --m and --t")
        fam = make_hash_family(args.seed, args.t, model.d, args.m)
        build = build_bool_sketch_net if args.construction == "bool" else build_min_sketch_net
        net = build(model, fam)
    elif args.construction == "det":
        if args.k is None:
            raise SystemExit("the deterministic construction needs --k")
        net = build_det_net(model, args.k)
    else:
        net = build_raw_bool_net(model)
    with _open_out(args.out) as f:
        f.write(net.to_json() + "\n")
    return 0


def _cmd_gen(args) -> int:
    kwargs = {}
    if args.config:
        with open(args.config) as f:
            kwargs = json.load(f)
    if args.seed is not None:
        kwargs["seed"] = args.seed
    cfg = (bench_mod.SynthConfig.paper_scale(**kwargs) if args.paper_scale
           else bench_mod.SynthConfig(**kwargs))
    ds = bench_mod.gen_synthetic(cfg)
    with open(args.out, "w") as f:
        bench_mod.dump_dataset(ds, f)
    if args.model_out:
        with open(args.model_out, "w") as f:
            f.write(ds.model.to_json() + "\n")
    return 0


def _cmd_bench(args) -> int:
    with open(args.spec) as f:
        spec = bench_mod.BenchSpec.from_json(f.read(), paper_scale=args.paper_scale)
    with open(args.out, "w") as f:
        bench_mod.run_benchmark(spec, f, log=lambda msg: print(msg, file=sys.stderr))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sketchnet", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sketch", help="sketch a sparse vector text file")
    ps.add_argument("--input", required=True, help="vector file: dimension line, then index:value pairs")
    ps.add_argument("--kind", choices=["bool", "count"], default="bool")
    ps.add_argument("--m", type=int, required=True, help="buckets per hash")
    ps.add_argument("--t", type=int, required=True, help="number of hash functions")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", help="output JSON path (default stdout)")
    ps.set_defaults(func=_cmd_sketch)

    pm = sub.add_parser("montecarlo", help="decoding failure-rate trials")
    pm.add_argument("--mode", choices=["min", "and", "median"], required=True)
    pm.add_argument("--d", type=int, required=True)
    pm.add_argument("--k", type=int, required=True)
    pm.add_argument("--m", type=int, required=True)
    pm.add_argument("--t", type=int, required=True)
    pm.add_argument("--trials", type=int, default=10_000)
    pm.add_argument("--epsilon", type=float, help="interval half-width factor (near-sparse trials)")
    pm.add_argument("--c", type=float, help="tail l1 budget (near-sparse trials)")
    pm.add_argument("--seed", type=int, default=0)
    pm.add_argument("--out", help="output CSV path (default stdout)")
    pm.set_defaults(func=_cmd_montecarlo)

    pb = sub.add_parser("build-net", help="construct a network from a model JSON file")
    pb.add_argument("--model", required=True)
    pb.add_argument("--construction", choices=["bool", "min", "det", "raw"], default="bool")
    pb.add_argument("--m", type=int)
    pb.add_argument("--t", type=int)
    pb.add_argument("--k", type=int, help="sparsity budget (det construction)")
    pb.add_argument("--seed", type=int, default=0, help="hash family seed")
    pb.add_argument("--out", help="output JSON path (default stdout)")
    pb.set_defaults(func=_cmd_build_net)

    pg = sub.add_parser("gen", help="generate a synthetic dataset")
    pg.add_argument("--out", required=True, help="dataset text file to write")
    pg.add_argument("--config", help="JSON file of generator overrides")
    pg.add_argument("--seed", type=int)
    pg.add_argument("--paper-scale", action="store_true")
    pg.add_argument("--model-out", help="also dump the generating model JSON")
    pg.set_defaults(func=_cmd_gen)

    pr = sub.add_parser("bench", help="run a benchmark grid spec")
    pr.add_argument("--spec", required=True, help="JSON spec file")
    pr.add_argument("--out", required=True, help="CSV report path")
    pr.add_argument("--paper-scale", action="store_true")
    pr.set_defaults(func=_cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
