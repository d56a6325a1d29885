"""Exceptions and warnings shared across the package."""


class MeshBuildError(Exception):
    """Base class for errors raised while constructing a surface."""


class NonManifoldError(MeshBuildError):
    """Oriented edge matching or vertex links are inconsistent."""


class OpenBoundaryError(MeshBuildError):
    """The face list does not describe a closed surface."""


class DisconnectedError(MeshBuildError):
    """The face list describes more than one connected component."""


class FlipIllegalError(Exception):
    """Edge cannot be flipped (both sides lie in the same face)."""


class InvalidInversiveDistanceError(ValueError):
    """Inversive distance <= 1: the two vertex circles are not separated."""


class DegenerateTriangleError(ValueError):
    """Edge lengths violate the strict triangle inequality."""


class NoOrthogonalCircleError(RuntimeError):
    """No real circle orthogonal to the three vertex circles.

    Cannot happen while all inversive distances exceed 1; signals corrupted
    upstream state rather than bad user input.
    """


class SeparationLostError(RuntimeError):
    """A flip produced an edge with inversive distance <= 1."""


class FlipLimitExceededError(RuntimeError):
    """The flip loop hit its iteration cap (suspected numerical cycling)."""


class PositiveEulerError(ValueError):
    """Surfaces with positive Euler characteristic are not supported."""


class NotConvergedError(RuntimeError):
    """Solver stopped before reaching the requested residual.

    Carries the partial result (trace up to the failure) in ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class FlatEdgeWarning(UserWarning):
    """Hessian evaluated within tolerance of a retriangulation boundary."""
