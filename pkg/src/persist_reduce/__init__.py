"""Safe pre-optimization support screening for gauge-penalized fitting.

The central object is the cone positively spanned by shifted observations
x_i - alpha*y.  Columns whose shifted observation is not an extreme ray of
that cone can never enter the support of an optimal coefficient vector,
provided the penalty weight sits below a loss-specific threshold and the
observations are in "vertex position".  This package identifies the extreme
rays with an output-sensitive search, computes the loss-specific thresholds,
verifies the geometric side conditions, and ships reference solvers so every
claim can be checked against an independently computed optimum.
"""

from ._version import __version__
from .cones import (MembershipCertificate, RaySet, angular_argmax,
                    conic_membership, find_base, nnls)
from .errors import (DegenerateDimension, DegenerateRay, Infeasible,
                     InvalidGamma, InvalidSpec, MaxIterations, NotInPos,
                     NotNormalized, NotPointed, SingularA, Unbounded,
                     ZeroColumn)
from .experiments import (Dataset, ExperimentConfig, HeatmapGrid,
                          exp_bench_reduction, exp_etacv_heatmap,
                          exp_raycount, gen_synthetic, planted_instance,
                          reference_lines, write_manifest, write_pgm)
from .geometry import (FaceReport, NonCoverReport, PolytopeHRep, face_report,
                       facet_enumerate, gauge_value, in_convex_hull,
                       interior_screen, tangent_necessary_check,
                       vertex_indices, vertex_noncover_check)
from .numerics import (DEFAULT_TOL, Rng, Tolerances, as_matrix, as_vector,
                       load_matrix, load_vector, normalize_columns,
                       save_matrix, symmetrize_design)
from .rays import (ExtremeRaySet, alignment_classes, extreme_rays,
                   extreme_rays_brute, merge_extreme_sets)
from .reduction import (EtaInterval, LossSpec, ReductionReport,
                        eta_interval_general, eta_ls_optimized,
                        eta_max_bregman, eta_max_least_squares, eta_max_lqq,
                        eta_max_mahalanobis, eta_max_unit_sphere,
                        eta_zero_threshold_ls, persistent_reduce,
                        polar_gauge_orthant, shifted_rays)
from .solvers import (CVResult, SolveResult, constrained_gauge, kfold_cv,
                      lasso_path, lasso_symmetrized, lqq_support_oracle,
                      nn_lasso_cd)

__all__ = [
    "__version__",
    # numerics
    "Tolerances", "DEFAULT_TOL", "Rng", "as_matrix", "as_vector",
    "normalize_columns", "symmetrize_design", "load_matrix", "load_vector",
    "save_matrix",
    # cones
    "RaySet", "MembershipCertificate", "nnls", "conic_membership",
    "find_base", "angular_argmax",
    # rays
    "ExtremeRaySet", "alignment_classes", "extreme_rays",
    "extreme_rays_brute", "merge_extreme_sets",
    # reduction
    "LossSpec", "EtaInterval", "ReductionReport", "shifted_rays",
    "polar_gauge_orthant", "eta_max_unit_sphere", "eta_max_least_squares",
    "eta_max_mahalanobis", "eta_max_lqq", "eta_max_bregman",
    "eta_zero_threshold_ls", "eta_interval_general", "eta_ls_optimized",
    "persistent_reduce",
    # geometry
    "PolytopeHRep", "FaceReport", "NonCoverReport", "gauge_value",
    "in_convex_hull", "vertex_indices", "facet_enumerate", "face_report",
    "vertex_noncover_check", "tangent_necessary_check", "interior_screen",
    # solvers
    "SolveResult", "CVResult", "nn_lasso_cd", "lasso_symmetrized",
    "constrained_gauge", "lqq_support_oracle", "lasso_path", "kfold_cv",
    # experiments
    "Dataset", "ExperimentConfig", "HeatmapGrid", "gen_synthetic",
    "planted_instance", "exp_etacv_heatmap", "exp_raycount",
    "exp_bench_reduction", "reference_lines", "write_pgm", "write_manifest",
    # errors
    "ZeroColumn", "NotNormalized", "DegenerateRay", "NotPointed",
    "MaxIterations", "Infeasible", "Unbounded", "SingularA", "InvalidSpec",
    "InvalidGamma", "DegenerateDimension", "NotInPos",
]
