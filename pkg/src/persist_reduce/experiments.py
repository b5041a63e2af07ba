"""Seeded experiment drivers and their on-disk artifact formats.

Every experiment is a pure function of (config, seed): trial t of cell c
draws from the counter-based stream with index c * trials + t, and results
aggregate by index, so runs are bit-identical no matter how many workers
execute them. Artifacts are plain CSV, ASCII PGM (P2) heatmaps, and a JSON
manifest recording config + seed + version.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ._version import __version__
from .cones import RaySet
from .numerics import DEFAULT_TOL, Rng, Tolerances, as_matrix, normalize_columns
from .rays import extreme_rays, extreme_rays_brute
from .solvers import kfold_cv


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray


def gen_synthetic(n: int, p: int, sigma: float, k: int, rng: Rng) -> Dataset:
    """Unit-normalized synthetic regression data.

    Columns start i.i.d. standard Gaussian; a k-sparse unit-norm coefficient
    vector on a random support produces y = X beta + sigma * noise. A
    negative sigma is the pure-noise sentinel: y is then an independent
    Gaussian draw with no signal. Columns of X and y are normalized to unit
    length at the end. Deterministic in rng (draw order: X, support, values,
    noise).
    """
    if not (1 <= k <= p):
        raise ValueError("k must be in [1, p]")
    gen = rng.generator()
    X = gen.standard_normal((n, p))
    support = gen.choice(p, size=k, replace=False)
    vals = gen.standard_normal(k)
    vals /= np.linalg.norm(vals)
    noise = gen.standard_normal(n)
    if sigma < 0.0:
        y = noise
    else:
        beta = np.zeros(p)
        beta[support] = vals
        y = X @ beta + sigma * noise
    X = normalize_columns(X)
    y = y / np.linalg.norm(y)
    return Dataset(X, y)


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared experiment knobs; the three drivers read the fields they need.

    k_rule "sqrtp" plants round(sqrt(p)) signal coefficients; "fixed" uses
    k_fixed (which is also the planted extreme-class count for the bench).
    """

    n_list: tuple[int, ...] = (18, 24, 30)
    p_list: tuple[int, ...] = (117, 304, 789, 2048)
    trials: int = 50
    sigma: float = 0.1
    k_rule: str = "sqrtp"
    k_fixed: int = 10
    folds: int = 5
    n_eta: int = 100
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if list(self.p_list) != sorted(self.p_list):
            raise ValueError("p_list must ascend")
        if self.k_rule not in ("sqrtp", "fixed"):
            raise ValueError("k_rule must be 'sqrtp' or 'fixed'")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def k_for(self, p: int) -> int:
        k = int(round(np.sqrt(p))) if self.k_rule == "sqrtp" else self.k_fixed
        return max(1, min(k, p))


@dataclass(frozen=True)
class HeatmapGrid:
    n_list: tuple[int, ...]
    p_list: tuple[int, ...]
    fraction: np.ndarray      # (len(p_list), len(n_list)), values in [0, 1]


def _etacv_trial(args):
    cfg, n, p, stream = args
    data = gen_synthetic(n, p, cfg.sigma, cfg.k_for(p), Rng(cfg.seed, stream))
    cv = kfold_cv(data.X, data.y, cfg.folds, cfg.n_eta,
                  Rng(cfg.seed, stream, counter=1))
    threshold = 2.0 - 2.0 * float(np.abs(data.y @ data.X).max())
    return cv.eta_cv <= threshold


def _run_tasks(fn, tasks, threads):
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks, chunksize=4))


def exp_etacv_heatmap(cfg: ExperimentConfig) -> HeatmapGrid:
    """Fraction of trials whose cross-validated penalty weight falls at or
    below the screening-threshold value 2 - 2 ||y'X||_inf, per (n, p) cell.
    """
    cells = [(n, p) for p in cfg.p_list for n in cfg.n_list]
    tasks = []
    for c, (n, p) in enumerate(cells):
        for t in range(cfg.trials):
            tasks.append((cfg, n, p, c * cfg.trials + t))
    hits = _run_tasks(_etacv_trial, tasks, cfg.threads)
    frac = np.empty((len(cfg.p_list), len(cfg.n_list)))
    for c, (n, p) in enumerate(cells):
        block = hits[c * cfg.trials:(c + 1) * cfg.trials]
        frac[cfg.p_list.index(p), cfg.n_list.index(n)] = np.mean(block)
    return HeatmapGrid(tuple(cfg.n_list), tuple(cfg.p_list), frac)


def _raycount_trial(args):
    cfg, n, p, stream = args
    gen = Rng(cfg.seed, stream).generator()
    X = normalize_columns(gen.standard_normal((n, p)))
    y = gen.standard_normal(n)
    y /= np.linalg.norm(y)
    res = extreme_rays(RaySet(X.T - y, -y))
    kept_set = set(res.kept)
    return sum(1 for cls in res.classes if cls[0] in kept_set)


def exp_raycount(cfg: ExperimentConfig):
    """Kept extreme-ray class counts for unit-sphere data, per p.

    Returns rows (p, mean, sd) using the first entry of n_list as the fixed
    ambient dimension. The counts saturate as p grows: new random columns
    land inside the cone of the existing extremes.
    """
    n = cfg.n_list[0]
    tasks = []
    for c, p in enumerate(cfg.p_list):
        for t in range(cfg.trials):
            tasks.append((cfg, n, p, c * cfg.trials + t))
    counts = _run_tasks(_raycount_trial, tasks, cfg.threads)
    rows = []
    for c, p in enumerate(cfg.p_list):
        block = np.asarray(counts[c * cfg.trials:(c + 1) * cfg.trials], dtype=float)
        rows.append((p, float(block.mean()), float(block.std(ddof=1) if block.size > 1 else 0.0)))
    return rows


def planted_instance(n: int, p: int, s: int, rng: Rng):
    """Ray set with exactly s planted extreme classes: s well-separated
    directions around a central axis plus p - s strictly interior mixtures.
    Returns (RaySet, planted 0-based indices)."""
    if not (2 <= s <= p):
        raise ValueError("need 2 <= s <= p")
    if n < 3 and s > 2:
        raise ValueError("planting s > 2 distinct extreme classes needs n >= 3")
    gen = rng.generator()
    axis = np.zeros(n)
    axis[0] = 1.0
    corners = np.empty((s, n))
    for i in range(s):
        d = gen.standard_normal(n)
        d -= (d @ axis) * axis
        nd = np.linalg.norm(d)
        if nd < 1e-12:
            d = np.zeros(n)
            d[1 % n] = 1.0
            nd = 1.0
        corners[i] = axis + 0.5 * d / nd
    weights = gen.dirichlet(np.ones(s), size=p - s) + 1e-3
    fill = weights @ corners
    rays = np.vstack([corners, fill])
    rays /= np.linalg.norm(rays, axis=1, keepdims=True)
    return RaySet(rays, axis), list(range(s))


def exp_bench_reduction(cfg: ExperimentConfig):
    """Wall-time comparison of the output-sensitive search vs the quadratic
    scan on planted-extreme instances, one row per p:
    (p, s, t_incremental, t_brute, membership_calls, kept_ok)."""
    n = cfg.n_list[0]
    s = cfg.k_fixed
    rows = []
    for c, p in enumerate(cfg.p_list):
        Z, planted = planted_instance(n, p, s, Rng(cfg.seed, c))
        t0 = time.perf_counter()
        fast = extreme_rays(Z)
        t_fast = time.perf_counter() - t0
        t0 = time.perf_counter()
        brute = extreme_rays_brute(Z)
        t_brute = time.perf_counter() - t0
        ok = list(fast.kept) == list(brute.kept) == planted
        rows.append((p, s, t_fast, t_brute, fast.membership_calls, ok))
    return rows


def write_pgm(path, fraction) -> None:
    """ASCII PGM (P2) heatmap: pixel = round(255 * fraction), so 0 encodes
    fraction 0 (white in the plots) and 255 encodes fraction 1 (black)."""
    grid = as_matrix(fraction, "fraction")
    if grid.size and (grid.min() < -1e-12 or grid.max() > 1.0 + 1e-12):
        raise ValueError("fractions must lie in [0, 1]")
    vals = np.rint(np.clip(grid, 0.0, 1.0) * 255).astype(int)
    lines = ["P2", "# fraction heatmap: 0=fraction 0, 255=fraction 1",
             f"{grid.shape[1]} {grid.shape[0]}", "255"]
    lines += [" ".join(str(int(v)) for v in row) for row in vals]
    Path(path).write_text("\n".join(lines) + "\n")


def reference_lines(n_list, cs=(-1.5, 0.0, 2.0)):
    """Exponential boundary overlays p = exp(0.16 n + c), one row per n."""
    rows = []
    for n in n_list:
        rows.append([float(n)] + [float(np.exp(0.16 * n + c)) for c in cs])
    return np.asarray(rows)


def write_manifest(path, cfg: ExperimentConfig, name: str) -> None:
    doc = {"experiment": name, "config": asdict(cfg), "seed": cfg.seed,
           "version": f"persist-reduce-{__version__}"}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
