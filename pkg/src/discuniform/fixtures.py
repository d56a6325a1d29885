"""Canonical sample surfaces used by the tests, docs and CLI examples.

The low-genus surfaces with few marked points all need loops or parallel
edges, so their gluings are written out explicitly rather than recovered
from the face lists.  Default decoration everywhere: unit reference radii
and inversive distance 2 on every edge, which makes every face the same
equilateral triangle of side sqrt(6).
"""

from __future__ import annotations

import numpy as np

from .mesh import Mesh, build_mesh
from .metric import DecoratedMetric

EQUILATERAL_INV = 2.0  # side length sqrt(6) at unit radii


def _uniform_metric(mesh: Mesh, radius: float = 1.0, inv: float = EQUILATERAL_INV) -> DecoratedMetric:
    return DecoratedMetric(
        radii0=np.full(mesh.vertex_count, radius),
        inv=np.full(mesh.edge_count, inv),
        u=np.zeros(mesh.vertex_count),
    )


def torus_one_vertex() -> tuple[Mesh, DecoratedMetric]:
    """Square torus: 1 vertex, 3 edges, 2 faces, chi = 0.

    Faces are the two halves of the fundamental square; the three edges
    (two sides and the diagonal) are all loops at the single vertex.
    """
    faces = [(0, 0, 0), (0, 0, 0)]
    twins = [(0, 4), (1, 5), (2, 3)]
    mesh = build_mesh(faces, 1, twins=twins)
    return mesh, _uniform_metric(mesh)


def torus_two_vertex() -> tuple[Mesh, DecoratedMetric]:
    """Torus from a 2x1 square grid: 2 vertices, 6 edges, 4 faces, chi = 0."""
    faces = [(0, 1, 1), (0, 1, 0), (1, 0, 0), (1, 0, 1)]
    twins = [(0, 4), (1, 11), (2, 3), (5, 7), (6, 10), (8, 9)]
    mesh = build_mesh(faces, 2, twins=twins)
    return mesh, _uniform_metric(mesh)


def genus2_octagon() -> tuple[Mesh, DecoratedMetric]:
    """Fan of the octagon with identifications a b a' b' c d c' d'.

    2 vertices (fan center and the single rim point), 12 edges (8 spokes,
    4 rim loops), 8 faces; chi = -2.  Spoke k of face f is glued to the
    reversed spoke of face f+1; rim sides are glued in the genus-2 pattern.
    """
    faces = [(0, 1, 1)] * 8
    twins = [(3 * f + 2, (3 * (f + 1)) % 24) for f in range(8)]
    twins += [(1, 7), (4, 10), (13, 19), (16, 22)]
    mesh = build_mesh(faces, 2, twins=twins)
    return mesh, _uniform_metric(mesh)


def sphere_quad_pillow() -> tuple[Mesh, DecoratedMetric]:
    """Two copies of a split square glued along the rim; chi = 2.

    Only used for combinatorial tests (no valid uniformization target).
    """
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (3, 2, 1)]
    mesh = build_mesh(faces, 4)
    return mesh, _uniform_metric(mesh)


def sphere_football() -> tuple[Mesh, DecoratedMetric]:
    """Two cones sharing a loop; contains a self-glued edge; chi = 2."""
    faces = [(0, 1, 0), (0, 2, 0)]
    twins = [(0, 1), (3, 4), (2, 5)]
    mesh = build_mesh(faces, 3, twins=twins)
    return mesh, _uniform_metric(mesh)


def icosahedron() -> tuple[Mesh, DecoratedMetric]:
    """Regular icosahedron; chi = 2 (rejected by the uniformizer)."""
    faces = [
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
        (1, 5, 6), (1, 6, 7), (1, 7, 2), (2, 7, 8), (2, 8, 3),
        (3, 8, 9), (3, 9, 4), (4, 9, 10), (4, 10, 5), (5, 10, 6),
        (6, 10, 11), (6, 11, 7), (7, 11, 8), (8, 11, 9), (9, 11, 10),
    ]
    mesh = build_mesh(faces, 12)
    return mesh, _uniform_metric(mesh)


def equilateral_decoration() -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    """Radii and inversive distances of the reference equilateral triangle."""
    return (1.0, 1.0, 1.0), (EQUILATERAL_INV,) * 3
