"""Closed-form geometry of a single decorated Euclidean triangle.

Corner convention: corners 0, 1, 2 in face order; edge ``a`` joins corners
``a`` and ``a+1`` (mod 3), so corner ``c`` is opposite edge ``c+1`` and the
apex over edge ``a`` is corner ``a+2``.  All heights and split distances
are signed; ``heights[a]`` is the distance of the common orthogonal-circle
center above edge ``a`` (positive on the triangle's side).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTriangleError, NoOrthogonalCircleError

ACOS_CLAMP = 1e-12   # silent clamping budget for law-of-cosines arguments


def _safe_acos(x: float) -> float:
    if abs(x) > 1.0:
        if abs(x) > 1.0 + ACOS_CLAMP:
            raise DegenerateTriangleError(f"law-of-cosines argument {x} outside [-1, 1]")
        x = math.copysign(1.0, x)
    return math.acos(x)


def inner_angles(l1: float, l2: float, l3: float) -> tuple[float, float, float]:
    """Angles of the triangle, each opposite the corresponding length."""
    if min(l1, l2, l3) <= 0.0 or min(l2 + l3 - l1, l3 + l1 - l2, l1 + l2 - l3) <= 0.0:
        raise DegenerateTriangleError(f"lengths {(l1, l2, l3)} do not form a triangle")
    a1 = _safe_acos((l2 * l2 + l3 * l3 - l1 * l1) / (2.0 * l2 * l3))
    a2 = _safe_acos((l3 * l3 + l1 * l1 - l2 * l2) / (2.0 * l3 * l1))
    a3 = math.pi - a1 - a2
    if a3 <= 0.0:
        raise DegenerateTriangleError(f"lengths {(l1, l2, l3)} give a flat corner")
    return a1, a2, a3


def _stable_area(lengths) -> float:
    """Heron's formula in Kahan's needle-safe arrangement."""
    a, b, c = sorted(lengths, reverse=True)
    product = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    if product <= 0.0:
        raise DegenerateTriangleError(f"lengths {lengths} do not form a triangle")
    return 0.25 * math.sqrt(product)


def edge_split_distance(ri: float, rj: float, inv: float, length: float) -> float:
    """Signed distance from vertex i to the edge center of {ij}."""
    return (ri * ri + ri * rj * inv) / length


def center_height(d_ik: float, d_ij: float, theta_i: float) -> float:
    """Signed height of the orthocenter over edge {ij}, from corner i data."""
    return (d_ik - d_ij * math.cos(theta_i)) / math.sin(theta_i)


def corner_area(l_ij: float, h_ij: float, l_ki: float, h_ki: float) -> float:
    """Signed area of the two center cells adjacent to corner i."""
    return 0.5 * l_ij * h_ij + 0.5 * l_ki * h_ki


def triangle_area(l_ij: float, l_jk: float, theta_j: float) -> float:
    """Area from two sides and the enclosed angle."""
    return 0.5 * l_ij * l_jk * math.sin(theta_j)


def face_circle(
    heights,
    lengths,
    radii,
    inv,
) -> tuple[float, tuple[float, float, float], tuple[float, float, float]]:
    """Radius, half-chords and intersection angles of the orthogonal circle.

    The half-chord over edge a reduces algebraically to
    ``r_a r_{a+1} sqrt(inv_a^2 - 1) / l_a``, which is free of the
    cancellation the power-of-a-vertex route suffers at extreme radius
    ratios.  The squared radius is over-determined (one relation per edge);
    the three values must agree to 1e-10 relative and the first is kept.
    """
    chord2 = []
    for a in range(3):
        separation = inv[a] * inv[a] - 1.0
        if separation <= 0.0:
            raise NoOrthogonalCircleError(f"edge {a}: inversive distance {inv[a]} <= 1")
        product = radii[a] * radii[(a + 1) % 3] / lengths[a]
        chord2.append(product * product * separation)
    r2 = [chord2[a] + heights[a] ** 2 for a in range(3)]
    scale = max(abs(v) for v in r2)
    if max(r2) - min(r2) > 1e-10 * scale:
        raise NoOrthogonalCircleError(f"inconsistent orthogonal-circle radius: {r2}")
    radius = math.sqrt(r2[0])
    half_chords = tuple(math.sqrt(c) for c in chord2)
    alphas = tuple(math.atan2(half_chords[a], heights[a]) for a in range(3))
    return radius, half_chords, alphas


@dataclass
class TriangleGeometry:
    """Every derived quantity of one decorated triangle."""

    lengths: tuple[float, float, float]   # edge a = {corner a, corner a+1}
    radii: tuple[float, float, float]     # per corner
    inv: tuple[float, float, float]       # per edge
    angles: tuple[float, float, float]    # per corner
    d_fwd: tuple[float, float, float]     # corner a -> center of edge a
    d_bwd: tuple[float, float, float]     # corner a+1 -> center of edge a
    heights: tuple[float, float, float]   # center over edge a
    circle_radius: float
    half_chords: tuple[float, float, float]
    alphas: tuple[float, float, float]
    area: float
    corner_areas: tuple[float, float, float]


def face_geometry(lengths, radii, inv) -> TriangleGeometry:
    """Assemble the full geometry of one decorated triangle.

    ``lengths[a]`` must equal the center distance derived from ``radii`` and
    ``inv[a]`` (the caller owns that consistency); only the triangle
    inequality is re-checked here.
    """
    lengths = tuple(float(x) for x in lengths)
    radii = tuple(float(x) for x in radii)
    inv = tuple(float(x) for x in inv)

    area = _stable_area(lengths)
    # rational cosines and area-based sines stay accurate on needle
    # triangles, where sin(acos(x)) loses several digits
    cosines, sines = [], []
    for c in range(3):
        out_len = lengths[c]
        in_len = lengths[(c + 2) % 3]
        opp_len = lengths[(c + 1) % 3]
        cosines.append(
            (out_len * out_len + in_len * in_len - opp_len * opp_len)
            / (2.0 * out_len * in_len)
        )
        sines.append(2.0 * area / (out_len * in_len))
    angles = tuple(_safe_acos(c) for c in cosines)

    d_fwd = tuple(
        edge_split_distance(radii[a], radii[(a + 1) % 3], inv[a], lengths[a])
        for a in range(3)
    )
    d_bwd = tuple(
        edge_split_distance(radii[(a + 1) % 3], radii[a], inv[a], lengths[a])
        for a in range(3)
    )
    heights = tuple(
        (d_bwd[(a + 2) % 3] - d_fwd[a] * cosines[a]) / sines[a] for a in range(3)
    )
    circle_radius, half_chords, alphas = face_circle(heights, lengths, radii, inv)
    corner_areas = tuple(
        corner_area(lengths[c], heights[c], lengths[(c + 2) % 3], heights[(c + 2) % 3])
        for c in range(3)
    )
    return TriangleGeometry(
        lengths=lengths,
        radii=radii,
        inv=inv,
        angles=angles,
        d_fwd=d_fwd,
        d_bwd=d_bwd,
        heights=heights,
        circle_radius=circle_radius,
        half_chords=half_chords,
        alphas=alphas,
        area=area,
        corner_areas=corner_areas,
    )


def angle_derivatives(geom: TriangleGeometry) -> np.ndarray:
    """Matrix of angle sensitivities d(angle at corner a)/d(factor at corner b).

    Off-diagonal entries are height/length of the shared edge; rows sum to
    zero and the matrix is symmetric.
    """
    deriv = np.zeros((3, 3))
    for a in range(3):
        b = (a + 1) % 3
        value = geom.heights[a] / geom.lengths[a]
        deriv[a, b] = value
        deriv[b, a] = value
    for a in range(3):
        deriv[a, a] = -(deriv[a, (a + 1) % 3] + deriv[a, (a + 2) % 3])
    return deriv


def center_heights_packing(lengths, radii, inv, area) -> tuple[float, float, float]:
    """Heights over the three edges from the packing data alone.

    Independent route to ``TriangleGeometry.heights`` through the inverse
    radii and the pairwise separation invariants; used as a cross-check.
    """
    kappa = [1.0 / r for r in radii]
    gamma = [inv[(c + 1) % 3] + inv[c] * inv[(c + 2) % 3] for c in range(3)]
    r2prod = radii[0] ** 2 * radii[1] ** 2 * radii[2] ** 2
    heights = []
    for a in range(3):
        c = (a + 2) % 3  # apex corner over edge a
        h_c = (
            kappa[c] * (1.0 - inv[a] ** 2)
            + kappa[(c + 1) % 3] * gamma[(c + 2) % 3]
            + kappa[(c + 2) % 3] * gamma[(c + 1) % 3]
        )
        heights.append(r2prod / (2.0 * area * lengths[a]) * kappa[c] * h_c)
    return tuple(heights)
