"""Dense numeric primitives: validation, tolerances, column ops, RNG, CSV I/O.

All data is float64 numpy. Matrices that hold datasets follow the design
convention: rows index observations, columns index features, so a design
matrix X with p features in ambient dimension n has shape (n, p). Point
clouds / ray sets (geometry module) store one point per row instead; each
function documents which convention it takes.

Tolerances are absolute: inputs are expected at unit scale (normalized
columns, unit-sphere reference points), which every caller in this package
guarantees before comparing against them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroColumn


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances used by the certificate and screening routines.

    feas_eps     residual norm below which a membership query counts as inside
    align_eps    deviation of a cosine from 1 below which two rays are aligned
    support_eps  coefficient magnitude below which an entry counts as zero
    lp_eps       slack tolerance for LP/KKT inequality certificates
    """

    feas_eps: float = 1e-9
    align_eps: float = 1e-10
    support_eps: float = 1e-8
    lp_eps: float = 1e-10

    def __post_init__(self):
        for name in ("feas_eps", "align_eps", "support_eps", "lp_eps"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if not self.support_eps > self.feas_eps:
            raise ValueError("support_eps must exceed feas_eps")


DEFAULT_TOL = Tolerances()


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D float64 C-contiguous array with finite entries."""
    m = np.ascontiguousarray(np.asarray(a, dtype=np.float64))
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def as_vector(a, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-D float64 array with finite entries."""
    v = np.ascontiguousarray(np.asarray(a, dtype=np.float64)).reshape(-1)
    if v.size and not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def normalize_columns(X, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Scale every column of X to unit Euclidean norm.

    Raises ZeroColumn (with the offending 0-based index) if any column norm
    falls below feas_eps. Idempotent up to floating-point roundoff.
    """
    X = as_matrix(X, "X")
    norms = np.sqrt(np.einsum("ij,ij->j", X, X))
    bad = np.flatnonzero(norms <= tol.feas_eps)
    if bad.size:
        raise ZeroColumn(int(bad[0]))
    return X / norms


def symmetrize_design(X) -> np.ndarray:
    """Return [-X  X]: the sign-split design whose nonnegative programs
    encode unconstrained l1 problems on X. Empty input stays empty."""
    X = as_matrix(X, "X")
    return np.hstack([-X, X])


@dataclass(frozen=True)
class Rng:
    """Counter-based random state: a value, not a mutable generator.

    The same (seed, stream, counter) triple yields the identical draw
    sequence on every platform (Philox4x64). Advancing means constructing a
    new Rng; nothing here mutates. Experiment trial t always uses stream t.
    """

    seed: int
    stream: int = 0
    counter: int = 0

    def __post_init__(self):
        for name in ("seed", "stream", "counter"):
            v = getattr(self, name)
            if not (isinstance(v, (int, np.integer)) and 0 <= v < 2**64):
                raise ValueError(f"{name} must be an integer in [0, 2^64)")

    def generator(self) -> np.random.Generator:
        """Fresh numpy Generator positioned at this state."""
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        ctr = np.array([self.counter, 0, 0, 0], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(counter=ctr, key=key))

    def with_stream(self, stream: int) -> "Rng":
        return Rng(self.seed, stream, 0)

    def bumped(self, k: int = 1) -> "Rng":
        """New state k counter blocks ahead (an independent draw position)."""
        return Rng(self.seed, self.stream, self.counter + k)


def rng_draw_gaussian(rng: Rng, length: int) -> np.ndarray:
    """Deterministic standard-normal vector of the given length.

    Pure in rng: calling twice with the same state gives bitwise-equal
    output. Use rng.bumped()/with_stream() to move to fresh draws.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    return rng.generator().standard_normal(length)


def load_matrix(path, name: str = "matrix") -> np.ndarray:
    """Read a plain numeric CSV (no header, one matrix row per line)."""
    try:
        m = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    except (ValueError, StopIteration) as e:
        raise ValueError(f"malformed CSV for {name}: {e}") from e
    return as_matrix(m, name)


def load_vector(path, name: str = "vector") -> np.ndarray:
    """Read a single-column (or single-row) numeric CSV as a vector."""
    m = load_matrix(path, name)
    if 1 not in m.shape and m.size != 0:
        raise ValueError(f"{name} must be a single-column CSV, got shape {m.shape}")
    return as_vector(m, name)


def save_matrix(path, X) -> None:
    """Write a matrix as plain numeric CSV, locale-independent, 17 sig digits."""
    np.savetxt(path, as_matrix(X, "matrix"), delimiter=",", fmt="%.17g")
