"""Constant-curvature uniformization of decorated piecewise-Euclidean surfaces."""

from .mesh import Mesh, build_mesh, euler_characteristic, flip_edge, vertex_star
from .metric import (
    DecoratedMetric,
    apply_conformal_factor,
    edge_length,
    inversive_distance,
    lengths_at,
    validate_metric,
)

__all__ = [
    "Mesh",
    "build_mesh",
    "euler_characteristic",
    "flip_edge",
    "vertex_star",
    "DecoratedMetric",
    "apply_conformal_factor",
    "edge_length",
    "inversive_distance",
    "lengths_at",
    "validate_metric",
]

__version__ = "0.1.0"
