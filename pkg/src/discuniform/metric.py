"""Decorated piecewise-Euclidean metrics in conformal coordinates.

The canonical per-edge datum is the inversive distance of the two vertex
circles: it is invariant under the conformal action and survives
retriangulation, so edge lengths are always derived from it together with
the current radii ``r_i = exp(u_i) * r0_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInversiveDistanceError
from .mesh import Mesh

SEPARATION_TOL = 1e-9          # slack required above I = 1
TRIANGLE_TOL_PER_PERIMETER = 1e-12


@dataclass
class DecoratedMetric:
    """Reference radii, per-edge inversive distances and a conformal factor.

    ``radii0`` and ``u`` are treated as immutable (scaling returns a new
    instance); ``inv`` is rewritten in place by metric-preserving edge
    flips, which keep the described surface unchanged.
    """

    radii0: np.ndarray   # (V,) reference radii, > 0
    inv: np.ndarray      # (E,) inversive distance per edge, > 1
    u: np.ndarray        # (V,) log-scale conformal factor

    def __post_init__(self):
        self.radii0 = np.asarray(self.radii0, dtype=float)
        self.inv = np.asarray(self.inv, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        if (self.radii0 <= 0).any():
            raise ValueError("reference radii must be positive")

    @property
    def radii(self) -> np.ndarray:
        """Current radii exp(u) * r0."""
        return np.exp(self.u) * self.radii0

    def copy(self) -> "DecoratedMetric":
        return DecoratedMetric(self.radii0.copy(), self.inv.copy(), self.u.copy())


def inversive_distance(length: float, ri: float, rj: float) -> float:
    """Separation invariant of two circles at center distance ``length``."""
    return (length * length - ri * ri - rj * rj) / (2.0 * ri * rj)


def edge_length(ri: float, rj: float, inv: float) -> float:
    """Distance between two circle centers with inversive distance ``inv``."""
    if inv <= 1.0:
        raise InvalidInversiveDistanceError(
            f"inversive distance {inv} <= 1 (circles not separated)"
        )
    return math.sqrt(ri * ri + rj * rj + 2.0 * inv * ri * rj)


def lengths_at(mesh: Mesh, metric: DecoratedMetric) -> np.ndarray:
    """Edge lengths induced by the current conformal factor."""
    radii = metric.radii
    lengths = np.empty(mesh.edge_count)
    for e in range(mesh.edge_count):
        i, j = mesh.edge_endpoints(e)
        lengths[e] = edge_length(radii[i], radii[j], metric.inv[e])
    return lengths


def apply_conformal_factor(metric: DecoratedMetric, du) -> DecoratedMetric:
    """Scale the metric by exp(du) per vertex; radii0 and inv are unchanged."""
    du = np.asarray(du, dtype=float)
    return DecoratedMetric(metric.radii0, metric.inv.copy(), metric.u + du)


@dataclass
class MetricDiagnostics:
    """Violations found by :func:`validate_metric`."""

    unseparated_edges: list = field(default_factory=list)   # (edge, inv)
    degenerate_faces: list = field(default_factory=list)    # (face, lengths)

    @property
    def ok(self) -> bool:
        return not self.unseparated_edges and not self.degenerate_faces

    def describe(self) -> list[str]:
        lines = []
        for e, value in self.unseparated_edges:
            lines.append(f"edge {e}: inversive distance {value:.6g} <= 1")
        for f, lengths in self.degenerate_faces:
            lines.append(f"face {f}: lengths {lengths} violate the triangle inequality")
        return lines


def validate_metric(
    mesh: Mesh,
    metric: DecoratedMetric,
    separation_tol: float = SEPARATION_TOL,
) -> MetricDiagnostics:
    """Report separation and triangle-inequality violations; never raises."""
    diagnostics = MetricDiagnostics()
    for e in range(mesh.edge_count):
        if metric.inv[e] <= 1.0 + separation_tol:
            diagnostics.unseparated_edges.append((e, float(metric.inv[e])))
    if diagnostics.unseparated_edges:
        return diagnostics

    radii = metric.radii
    for f in range(mesh.face_count):
        lengths = []
        for h in mesh.face_halfedges(f):
            e = int(mesh.edge_of[h])
            i, j = mesh.edge_endpoints(e)
            lengths.append(edge_length(radii[i], radii[j], metric.inv[e]))
        perimeter = sum(lengths)
        slack = TRIANGLE_TOL_PER_PERIMETER * perimeter
        if min(perimeter - 2.0 * l for l in lengths) <= slack:
            diagnostics.degenerate_faces.append((f, tuple(lengths)))
    return diagnostics
