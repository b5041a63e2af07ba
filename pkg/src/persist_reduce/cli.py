"""Command-line front end.

One binary, six subcommands:

  reduce   screen a design against a loss spec and emit the kept set
  extray   extreme rays of an explicit ray set (CSV rows are rays)
  solve    reference solvers (nonnegative CD, signed lasso, exact-fit LP)
  cv       k-fold cross-validation of the signed lasso
  geom     polytope reports: facets, face incidence, cover/interior checks
  exp      seeded experiment drivers writing CSV/PGM/manifest artifacts

Exit codes: 0 success; 1 I/O failure; 2 malformed input (including unknown
flags, which argparse rejects); 3 a screening condition was violated;
4 degenerate geometry (unpointed cone, dimension collapse); 5 an iterative
solver failed to converge. JSON payloads carry 1-based indices and
round-trip-exact floats.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import errors
from ._version import __version__
from .cones import RaySet
from .experiments import (ExperimentConfig, exp_bench_reduction,
                          exp_etacv_heatmap, exp_raycount, reference_lines,
                          write_manifest, write_pgm)
from .geometry import (face_report, facet_enumerate, interior_screen,
                       vertex_noncover_check)
from .numerics import Rng, load_matrix, load_vector, save_matrix
from .rays import extreme_rays, extreme_rays_brute
from .reduction import LossSpec, persistent_reduce
from .solvers import constrained_gauge, kfold_cv, lasso_path, lasso_symmetrized, nn_lasso_cd

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 2
EXIT_CONDITION = 3
EXIT_GEOMETRY = 4
EXIT_NO_CONVERGENCE = 5


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cmd_reduce(args) -> int:
    X = load_matrix(args.x, "X")
    if args.loss == "mahalanobis":
        A = load_matrix(args.a_mat, "A")
        b = load_vector(args.b_vec, "b")
        spec = LossSpec("mahalanobis", alpha=args.alpha, A=A, b=b, c=args.c)
        y = spec.reference_point()
    else:
        y = load_vector(args.y, "y")
        spec = LossSpec(args.loss, alpha=args.alpha, q=args.q)
    report = persistent_reduce(X, y, spec, args.eta)
    _emit(report.to_json_dict(), args.out)
    return EXIT_OK if report.valid else EXIT_CONDITION


def _cmd_extray(args) -> int:
    Z = load_matrix(args.z, "Z")
    base = load_vector(args.g, "g") if args.g else None
    rays = RaySet(Z, base)
    res = extreme_rays_brute(rays) if args.brute else extreme_rays(rays)
    _emit({"kept": [i + 1 for i in res.kept],
           "discarded": [i + 1 for i in res.discarded],
           "n_classes": len(res.classes),
           "classes": [[i + 1 for i in cls] for cls in res.classes],
           "membership_calls": res.membership_calls,
           "lp_calls": res.lp_calls}, args.out)
    return EXIT_OK


def _cmd_solve(args) -> int:
    X = load_matrix(args.x, "X")
    y = load_vector(args.y, "y")
    if args.solver == "constrained":
        res = constrained_gauge(X, y)
    elif args.solver == "lasso":
        res = lasso_symmetrized(X, y, args.eta)
    else:
        res = nn_lasso_cd(X, y, args.eta)
    _emit(res.to_json_dict(), args.out)
    return EXIT_OK if res.converged else EXIT_NO_CONVERGENCE


def _cmd_cv(args) -> int:
    X = load_matrix(args.x, "X")
    y = load_vector(args.y, "y")
    res = kfold_cv(X, y, args.folds, args.n_eta, Rng(args.seed))
    if args.path_csv:
        save_matrix(args.path_csv, lasso_path(X, y, res.eta_grid))
    _emit(res.to_json_dict(), args.out)
    return EXIT_OK


def _cmd_geom(args) -> int:
    if args.facets or args.face:
        V = load_matrix(args.vertices, "vertices")
        K = facet_enumerate(V)
        if args.facets:
            _emit({"normals": [list(map(float, h)) for h in K.normals],
                   "offsets": list(map(float, K.offsets)),
                   "n_facets": int(K.offsets.shape[0])}, args.out)
            return EXIT_OK
        y = load_vector(args.y, "y")
        rep = face_report(K, y)
        _emit({"xi": rep.xi,
               "active": [i + 1 for i in rep.active],
               "active_nonzero": [i + 1 for i in rep.active_nonzero],
               "F_vertices": [i + 1 for i in rep.F_vertices],
               "msh": [i + 1 for i in rep.msh],
               "W": [i + 1 for i in rep.W],
               "X_extreme": [i + 1 for i in rep.X_extreme],
               "xi_minus_y": rep.xi_minus_y if np.isfinite(rep.xi_minus_y) else "inf"},
              args.out)
        return EXIT_OK
    X = load_matrix(args.x, "X")
    if args.noncover:
        y = load_vector(args.y, "y")
        rep = vertex_noncover_check(X, y)
        _emit({"ok": rep.ok, "column_ok": list(rep.column_ok),
               "y_ok": rep.y_ok, "distinct": rep.distinct}, args.out)
        return EXIT_OK if rep.ok else EXIT_CONDITION
    removable = interior_screen(X)
    _emit({"removable": [i + 1 for i in removable]}, args.out)
    return EXIT_OK


def _cmd_exp(args) -> int:
    threads = args.threads or int(os.environ.get("PERSIST_REDUCE_THREADS", "1"))
    cfg = ExperimentConfig(
        n_list=tuple(args.n_list), p_list=tuple(args.p_list),
        trials=args.trials, sigma=args.sigma,
        k_rule=args.k_rule, k_fixed=args.k_fixed,
        folds=args.folds, n_eta=args.n_eta, seed=args.seed, threads=threads)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.name == "etacv":
        grid = exp_etacv_heatmap(cfg)
        header = np.concatenate([[0.0], np.asarray(grid.n_list, dtype=float)])
        body = np.column_stack([np.asarray(grid.p_list, dtype=float), grid.fraction])
        save_matrix(out / "fractions.csv", np.vstack([header, body]))
        write_pgm(out / "heatmap.pgm", grid.fraction)
        save_matrix(out / "reference_lines.csv", reference_lines(grid.n_list))
    elif args.name == "raycount":
        rows = exp_raycount(cfg)
        save_matrix(out / "raycount.csv", np.asarray(rows, dtype=float))
    else:
        rows = exp_bench_reduction(cfg)
        save_matrix(out / "bench.csv",
                    np.asarray([r[:5] + (1.0 if r[5] else 0.0,) for r in rows]))
    write_manifest(out / "manifest.json", cfg, args.name)
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="persist-reduce",
        description="Safe support screening via extreme rays of shifted-data cones.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="screen a design against a loss spec")
    p.add_argument("--x", required=True, help="design CSV (rows = observations)")
    p.add_argument("--y", help="reference vector CSV (not used for mahalanobis)")
    p.add_argument("--loss", default="ls",
                   choices=["ls", "mahalanobis", "lqq", "bregman"])
    p.add_argument("--eta", type=float, required=True, help="penalty weight")
    p.add_argument("--alpha", type=float, default=1.0, help="cone scale")
    p.add_argument("--q", type=float, default=2.0, help="power-loss exponent")
    p.add_argument("--a-mat", help="Mahalanobis quadratic matrix CSV")
    p.add_argument("--b-vec", help="Mahalanobis linear vector CSV")
    p.add_argument("--c", type=float, default=0.0, help="Mahalanobis constant")
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("extray", help="extreme rays of an explicit ray set")
    p.add_argument("--z", required=True, help="ray CSV, one ray per row")
    p.add_argument("--g", help="optional base direction CSV")
    p.add_argument("--brute", action="store_true", help="quadratic reference scan")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_extray)

    p = sub.add_parser("solve", help="reference solvers")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--solver", default="nn", choices=["nn", "lasso", "constrained"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("cv", help="k-fold cross-validation of the signed lasso")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--n-eta", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--path-csv", help="also dump the full-data coefficient path")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("geom", help="polytope and cover reports")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--facets", action="store_true", help="H-rep of conv(vertices)")
    mode.add_argument("--face", action="store_true", help="face report for --y")
    mode.add_argument("--noncover", action="store_true", help="vertex non-cover check")
    mode.add_argument("--screen", action="store_true", help="interior-column screen")
    p.add_argument("--vertices", help="point CSV, one point per row")
    p.add_argument("--x", help="design CSV for --noncover/--screen")
    p.add_argument("--y", help="query vector CSV")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_geom)

    p = sub.add_parser("exp", help="seeded experiment drivers")
    p.add_argument("--name", required=True, choices=["etacv", "raycount", "bench"])
    p.add_argument("--seed", type=int, required=True,
                   help="experiments never default to wall-clock seeding")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n-list", type=_int_list, default=[18, 24, 30])
    p.add_argument("--p-list", type=_int_list, default=[117, 304, 789, 2048])
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--sigma", type=float, default=0.1)
    p.add_argument("--k-rule", default="sqrtp", choices=["sqrtp", "fixed"])
    p.add_argument("--k-fixed", type=int, default=10)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--n-eta", type=int, default=100)
    p.add_argument("--threads", type=int, default=0,
                   help="0 = use PERSIST_REDUCE_THREADS or 1")
    p.set_defaults(func=_cmd_exp)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except IsADirectoryError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except PermissionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (errors.NotPointed, errors.DegenerateRay, errors.DegenerateDimension,
            errors.NotInPos, errors.ZeroColumn, errors.Infeasible) as e:
        print(f"geometry error: {e}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (errors.MaxIterations,) as e:
        print(f"convergence error: {e}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (errors.InvalidSpec, errors.InvalidGamma, errors.NotNormalized,
            errors.SingularA) as e:
        print(f"condition error: {e}", file=sys.stderr)
        return EXIT_CONDITION
    except ValueError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
