#!/usr/bin/env python3
"""Benchmark the output-sensitive extreme-ray search against brute force.

bench.csv rows: p, planted extreme count, fast seconds, brute seconds,
membership calls, kept_ok (1.0 when fast == brute == planted extremes).
Designs are planted so the true extreme set is known exactly.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from persist_reduce.experiments import (
    ExperimentConfig,
    exp_bench_reduction,
    write_manifest,
)
from persist_reduce.numerics import save_matrix


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--p-list", default="200,500,1000,2000,5000")
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="out/bench")
    args = ap.parse_args(argv)

    cfg = ExperimentConfig(
        n_list=(args.n,),
        p_list=tuple(int(t) for t in args.p_list.split(",")),
        trials=args.trials, seed=args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    rows = exp_bench_reduction(cfg)
    save_matrix(out / "bench.csv",
                np.asarray([r[:5] + (1.0 if r[5] else 0.0,) for r in rows]))
    write_manifest(out / "manifest.json", cfg, "bench")

    print(f"n={args.n}: {time.perf_counter() - t0:.1f}s -> {out}")
    print(f"  {'p':>6}  {'fast s':>8}  {'brute s':>8}  {'calls':>7}  ok")
    for p, s, tf, tb, calls, ok in rows:
        print(f"  {int(p):>6}  {tf:8.3f}  {tb:8.3f}  {int(calls):>7}  "
              f"{'yes' if ok else 'NO'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
