#!/usr/bin/env python3
"""How many columns survive screening as p grows at fixed n.

Each row of raycount.csv is (p, mean kept, sd kept) over --trials draws
of a unit-column Gaussian design with a planted sparse response.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from persist_reduce.experiments import (
    ExperimentConfig,
    exp_raycount,
    write_manifest,
)
from persist_reduce.numerics import save_matrix


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--p-list", default="100,200,400,800,1600,3200")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--sigma", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out-dir", default="out/raycount")
    args = ap.parse_args(argv)

    cfg = ExperimentConfig(
        n_list=(args.n,),
        p_list=tuple(int(t) for t in args.p_list.split(",")),
        trials=args.trials, sigma=args.sigma,
        seed=args.seed, threads=args.threads)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    rows = exp_raycount(cfg)
    save_matrix(out / "raycount.csv", np.asarray(rows, dtype=float))
    write_manifest(out / "manifest.json", cfg, "raycount")

    print(f"n={args.n}, {cfg.trials} trials/cell: "
          f"{time.perf_counter() - t0:.1f}s -> {out}")
    for p, mean, sd in rows:
        print(f"  p={int(p):>6d}  kept {mean:8.1f} +- {sd:.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
