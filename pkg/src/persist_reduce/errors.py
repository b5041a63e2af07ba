"""Exception types shared across the package.

Every error that maps to a CLI exit code lives here so the command-line
front end can translate failures uniformly.
"""


class ZeroColumn(ValueError):
    """A column (or ray) that must be nonzero has norm below tolerance."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"column {index} has norm below tolerance")


class NotNormalized(ValueError):
    """A column expected on the unit sphere is not unit length."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"column {index} is not unit length")


class DegenerateRay(ValueError):
    """A shifted generator collapsed to (numerically) zero."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"shifted ray {index} is numerically zero")


class NotPointed(RuntimeError):
    """The conic hull contains a line; no strictly positive base exists."""


class MaxIterations(RuntimeError):
    """An iterative routine hit its anti-cycling iteration cap."""


class Infeasible(RuntimeError):
    """A linear program (or membership system) has no feasible point."""


class Unbounded(RuntimeError):
    """A linear program is unbounded below."""


class SingularA(ValueError):
    """The quadratic-form matrix of a Mahalanobis loss is singular."""


class InvalidSpec(ValueError):
    """Parameters passed to a LossSpec violate its preconditions."""


class InvalidGamma(ValueError):
    """A loss-shift parameter outside [0, 1]."""


class DegenerateDimension(ValueError):
    """A vertex set does not affinely span the ambient dimension."""


class NotInPos(ValueError):
    """A query point is not in the conic hull where required."""
