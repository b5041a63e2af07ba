#!/usr/bin/env python3
"""Sweep (n, p) cells and record how often the cross-validated penalty
falls at or below the zero-solution threshold of the screened design.

Writes fractions.csv (first row/col are axis labels), heatmap.pgm
(grayscale, 255 = every trial hit the event), reference_lines.csv
(p = exp(0.16 n + c) guide curves) and manifest.json into --out-dir.

The full desk-scale grid takes a while; start with something like
    python3 scripts/run_etacv_heatmap.py --n-list 10,14,18 \
        --p-list 64,256,1024 --trials 20 --out-dir out/etacv
and scale up once the timing is acceptable.  Results depend only on
(config, seed), never on --threads.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from persist_reduce.experiments import (
    ExperimentConfig,
    exp_etacv_heatmap,
    reference_lines,
    write_manifest,
    write_pgm,
)
from persist_reduce.numerics import save_matrix


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-list", default="10,14,18,22",
                    help="comma list of sample sizes (rows of the grid)")
    ap.add_argument("--p-list", default="64,128,256,512,1024,2048",
                    help="comma list of dimensions (columns of the grid)")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--sigma", type=float, default=0.1)
    ap.add_argument("--folds", type=int, default=5)
    ap.add_argument("--n-eta", type=int, default=60)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out-dir", default="out/etacv")
    return ap.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    cfg = ExperimentConfig(
        n_list=tuple(int(t) for t in args.n_list.split(",")),
        p_list=tuple(int(t) for t in args.p_list.split(",")),
        trials=args.trials, sigma=args.sigma, folds=args.folds,
        n_eta=args.n_eta, seed=args.seed, threads=args.threads)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    grid = exp_etacv_heatmap(cfg)
    elapsed = time.perf_counter() - t0

    header = np.concatenate([[0.0], np.asarray(grid.n_list, dtype=float)])
    body = np.column_stack(
        [np.asarray(grid.p_list, dtype=float), grid.fraction])
    save_matrix(out / "fractions.csv", np.vstack([header, body]))
    write_pgm(out / "heatmap.pgm", grid.fraction)
    save_matrix(out / "reference_lines.csv", reference_lines(grid.n_list))
    write_manifest(out / "manifest.json", cfg, "etacv")

    print(f"{len(cfg.n_list)}x{len(cfg.p_list)} cells, {cfg.trials} trials "
          f"each: {elapsed:.1f}s -> {out}")
    for j, p in enumerate(grid.p_list):
        row = " ".join(f"{grid.fraction[j, i]:.2f}"
                       for i in range(len(grid.n_list)))
        print(f"  p={p:>6d}  {row}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
