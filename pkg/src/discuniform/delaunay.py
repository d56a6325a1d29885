"""Weighted Delaunay predicate, quad layout and the greedy flip loop.

An edge is weighted Delaunay when the orthocenter heights of its two
adjacent faces sum to at least zero.  The flip loop repairs violations
worst-first, rewriting the flipped edge's separation invariant from the
planar layout of its quad, and leaves every edge within ``tol`` of the
predicate.  Edges within ``tol`` of zero ("flat": both triangulations are
valid) are never flipped, which keeps the loop from oscillating across
retriangulation boundaries.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateTriangleError,
    FlipIllegalError,
    FlipLimitExceededError,
    SeparationLostError,
)
from .mesh import Mesh, flip_edge
from .metric import DecoratedMetric, edge_length, inversive_distance, lengths_at
from .trigeom import face_geometry

DELAUNAY_TOL_PER_LENGTH = 1e-10   # tolerance = this times the mean edge length
FLIP_CAP_PER_EDGE = 100


def edge_is_delaunay(height_first: float, height_second: float, tol: float) -> bool:
    """Predicate on the two orthocenter heights over a shared edge."""
    return height_first + height_second >= -tol


def delaunay_tolerance(lengths) -> float:
    return DELAUNAY_TOL_PER_LENGTH * float(np.mean(lengths))


@dataclass
class QuadLayout:
    """Planar layout of the two faces sharing an edge.

    The shared edge runs from ``first`` at the origin to ``second`` on the
    positive x axis; ``apex_upper`` is the opposite corner of the edge's
    own face, ``apex_lower`` (negative y) of its twin's face.
    """

    first: np.ndarray
    second: np.ndarray
    apex_upper: np.ndarray
    apex_lower: np.ndarray
    diagonal_length: float


@dataclass
class FlipLog:
    """Flips performed by one :func:`make_weighted_delaunay` run."""

    entries: list = field(default_factory=list)   # (edge, height sum before)
    tolerance: float = 0.0

    @property
    def flip_count(self) -> int:
        return len(self.entries)


def _face_geometry_at(mesh: Mesh, metric: DecoratedMetric, lengths, radii, face: int):
    cycle = mesh.face_halfedges(face)
    edges = [int(mesh.edge_of[h]) for h in cycle]
    corners = [int(mesh.origin[h]) for h in cycle]
    return face_geometry(
        [lengths[e] for e in edges],
        [radii[c] for c in corners],
        [metric.inv[e] for e in edges],
    )


def _edge_height_sum(mesh: Mesh, metric: DecoratedMetric, lengths, radii, edge: int) -> float:
    total = 0.0
    for h in mesh.edge_halfedges(edge):
        face = int(mesh.face_of[h])
        cycle = mesh.face_halfedges(face)
        geom = _face_geometry_at(mesh, metric, lengths, radii, face)
        total += geom.heights[cycle.index(h)]
    return total


def edge_height_sums(mesh: Mesh, metric: DecoratedMetric) -> np.ndarray:
    """Predicate height sums for every edge under the current factor."""
    lengths = lengths_at(mesh, metric)
    radii = metric.radii
    return np.array(
        [_edge_height_sum(mesh, metric, lengths, radii, e) for e in range(mesh.edge_count)]
    )


def _third_point(l_base: float, l_from_first: float, l_from_second: float):
    x = (l_base * l_base + l_from_first * l_from_first - l_from_second * l_from_second) / (
        2.0 * l_base
    )
    y_sq = l_from_first * l_from_first - x * x
    if y_sq <= 0.0:
        raise DegenerateTriangleError(
            f"no planar triangle with sides {(l_base, l_from_first, l_from_second)}"
        )
    return x, math.sqrt(y_sq)


def layout_quad(mesh: Mesh, lengths, edge: int) -> QuadLayout:
    """Lay the two faces of ``edge`` flat; vertices may repeat, points do not."""
    h = int(mesh.edge_anchor[edge])
    t = int(mesh.twin[h])
    if int(mesh.face_of[h]) == int(mesh.face_of[t]):
        raise FlipIllegalError(f"edge {edge} bounds one face on both sides")

    l_shared = float(lengths[edge])
    a1 = int(mesh.nxt[h])
    a2 = int(mesh.nxt[a1])
    b1 = int(mesh.nxt[t])
    b2 = int(mesh.nxt[b1])

    x_up, y_up = _third_point(
        l_shared,
        float(lengths[mesh.edge_of[a2]]),   # first -> upper apex
        float(lengths[mesh.edge_of[a1]]),   # second -> upper apex
    )
    x_dn, y_dn = _third_point(
        l_shared,
        float(lengths[mesh.edge_of[b1]]),   # first -> lower apex
        float(lengths[mesh.edge_of[b2]]),   # second -> lower apex
    )
    upper = np.array([x_up, y_up])
    lower = np.array([x_dn, -y_dn])
    return QuadLayout(
        first=np.array([0.0, 0.0]),
        second=np.array([l_shared, 0.0]),
        apex_upper=upper,
        apex_lower=lower,
        diagonal_length=float(np.linalg.norm(upper - lower)),
    )


def flip_edge_metric(mesh: Mesh, metric: DecoratedMetric, edge: int, lengths=None) -> float:
    """Flip ``edge`` and rewrite its separation invariant from the quad layout.

    Returns the new diagonal length.  The surface is unchanged: the new
    invariant reproduces exactly the diagonal the layout prescribes.
    """
    if lengths is None:
        lengths = lengths_at(mesh, metric)
    layout = layout_quad(mesh, lengths, edge)

    h = int(mesh.edge_anchor[edge])
    apex_own = int(mesh.origin[mesh.nxt[mesh.nxt[h]]])
    t = int(mesh.twin[h])
    apex_other = int(mesh.origin[mesh.nxt[mesh.nxt[t]]])

    radii = metric.radii
    new_inv = inversive_distance(
        layout.diagonal_length, radii[apex_own], radii[apex_other]
    )
    if not new_inv > 1.0:
        raise SeparationLostError(
            f"flip of edge {edge} gives inversive distance {new_inv} <= 1"
        )
    flip_edge(mesh, edge)
    metric.inv[edge] = new_inv
    return layout.diagonal_length


def make_weighted_delaunay(mesh: Mesh, metric: DecoratedMetric, tol=None) -> FlipLog:
    """Flip until every edge satisfies the predicate within ``tol``.

    Mutates ``mesh`` and ``metric.inv`` in place; worst violation first,
    re-examining the four quad boundary edges after each flip.
    """
    lengths = lengths_at(mesh, metric)
    radii = metric.radii
    if tol is None:
        tol = delaunay_tolerance(lengths)
    cap = FLIP_CAP_PER_EDGE * mesh.edge_count
    log = FlipLog(tolerance=tol)

    heap = []
    for e in range(mesh.edge_count):
        gap = _edge_height_sum(mesh, metric, lengths, radii, e)
        if gap < -tol:
            heapq.heappush(heap, (gap, e))

    while heap:
        _, e = heapq.heappop(heap)
        gap = _edge_height_sum(mesh, metric, lengths, radii, e)  # may be stale
        if gap >= -tol:
            continue
        if log.flip_count >= cap:
            raise FlipLimitExceededError(
                f"exceeded {cap} flips; predicate still violated at edge {e}"
            )
        h = int(mesh.edge_anchor[e])
        t = int(mesh.twin[h])
        neighbours = [
            int(mesh.edge_of[mesh.nxt[h]]),
            int(mesh.edge_of[mesh.nxt[mesh.nxt[h]]]),
            int(mesh.edge_of[mesh.nxt[t]]),
            int(mesh.edge_of[mesh.nxt[mesh.nxt[t]]]),
        ]
        log.entries.append((e, gap))
        flip_edge_metric(mesh, metric, e, lengths)
        i, j = mesh.edge_endpoints(e)
        lengths[e] = edge_length(radii[i], radii[j], metric.inv[e])
        for candidate in [e] + neighbours:
            gap = _edge_height_sum(mesh, metric, lengths, radii, candidate)
            if gap < -tol:
                heapq.heappush(heap, (gap, candidate))
    return log
