"""Scale energy, its derivatives, dual-cell areas and discrete curvature.

The energy is assembled from one potential per face whose gradient in the
three corner factors is the triple of inner angles; summing over faces and
subtracting from the linear term makes the total gradient the vector of
angle defects.  Everything is evaluated on a weighted Delaunay
triangulation (the evaluation retriangulates first), which is what extends
the definitions to arbitrary conformal factors.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .delaunay import delaunay_tolerance, edge_height_sums, make_weighted_delaunay
from .errors import FlatEdgeWarning
from .mesh import Mesh
from .metric import DecoratedMetric, lengths_at
from .trigeom import TriangleGeometry, angle_derivatives, face_geometry

# --------------------------------------------------------------------------
# Lobachevsky function


def _zeta_even(exponent: int) -> float:
    """Riemann zeta at even integers; exact low values, fast series above."""
    known = {
        2: math.pi**2 / 6.0,
        4: math.pi**4 / 90.0,
        6: math.pi**6 / 945.0,
        8: math.pi**8 / 9450.0,
        10: math.pi**10 / 93555.0,
    }
    if exponent in known:
        return known[exponent]
    total = 0.0
    for k in range(60, 0, -1):
        total += float(k) ** (-exponent)
    return total


_SERIES_TERMS = 40
_SERIES_COEFS = [
    _zeta_even(2 * n) / (n * (2 * n + 1) * math.pi ** (2 * n))
    for n in range(1, _SERIES_TERMS + 1)
]


def lobachevsky(x: float) -> float:
    """Odd, pi-periodic integral of -log|2 sin|.

    Reduced to |y| <= pi/2 and evaluated by the power series obtained from
    integrating log(sin t / t) termwise, which isolates the logarithmic
    singularity in the closed-form ``y - y log|2y|`` part and converges
    geometrically with ratio (y/pi)^2 <= 1/4.
    """
    y = x - math.pi * round(x / math.pi)
    if y == 0.0:
        return 0.0
    total = y - y * math.log(abs(2.0 * y))
    power = y
    for coef in _SERIES_COEFS:
        power *= y * y
        term = coef * power
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


# --------------------------------------------------------------------------
# per-face potential


def truncated_volume(thetas, opposite_alphas) -> float:
    """Volume of the hyperbolic tetrahedron over one decorated triangle.

    ``thetas[c]`` is the inner angle at corner ``c`` and
    ``opposite_alphas[c]`` the circle intersection angle of the edge not
    containing ``c``; each corner contributes its angle plus four averaged
    combinations with the two adjacent edges' intersection angles.
    """
    twice = 0.0
    for c in range(3):
        theta = thetas[c]
        first = opposite_alphas[(c + 1) % 3]
        second = opposite_alphas[(c + 2) % 3]
        twice += lobachevsky(theta)
        for s1 in (1.0, -1.0):
            for s2 in (1.0, -1.0):
                twice += lobachevsky(0.5 * (math.pi + s1 * first + s2 * second - theta))
    return 0.5 * twice


def triangle_potential(log_radii, geom: TriangleGeometry, lambdas) -> float:
    """Per-face potential whose gradient in the log radii is the angle triple.

    ``log_radii[c]`` is the log of the corner's current circle radius (the
    conformal factor plus the log reference radius; the two coincide for
    unit reference radii) and ``lambdas[a]`` is arccosh of the separation
    invariant of edge ``a``.  The volume term's angle partials are
    ``log(radius / orthocircle radius)`` per corner, so only this choice of
    linear term makes the gradient exactly the angle triple for arbitrary
    decorations.
    """
    opposite_alphas = tuple(geom.alphas[(c + 1) % 3] for c in range(3))
    value = -2.0 * truncated_volume(geom.angles, opposite_alphas)
    for c in range(3):
        value += geom.angles[c] * log_radii[c]
    for a in range(3):
        value += (0.5 * math.pi - geom.alphas[a]) * lambdas[a]
    return value


# --------------------------------------------------------------------------
# surface-level evaluation


@dataclass
class EnergyReport:
    """Energy, angle defects, dual areas and curvature at one factor."""

    energy: float
    defects: np.ndarray        # angle defect per vertex
    cell_areas: np.ndarray     # dual-cell area per vertex
    total_area: float
    curvatures: np.ndarray     # defect / cell area
    hessian: np.ndarray | None
    faces: list                # triangulation snapshot (vertex triples)
    flips: int                 # flips performed before evaluating
    flat_edges: list           # edges within tolerance of the predicate boundary


def evaluate(
    mesh: Mesh,
    metric: DecoratedMetric,
    need_hessian: bool = False,
    run_delaunay: bool = True,
) -> EnergyReport:
    """Retriangulate to weighted Delaunay, then accumulate per-face data.

    Mutates ``mesh`` and ``metric.inv`` through the flip phase; pass
    ``run_delaunay=False`` only when the current triangulation is already
    known to be weighted Delaunay.
    """
    flips = make_weighted_delaunay(mesh, metric).flip_count if run_delaunay else 0

    lengths = lengths_at(mesh, metric)
    radii = metric.radii
    log_radii = np.log(radii)
    lambdas = np.arccosh(metric.inv)
    n = mesh.vertex_count

    potential_sum = 0.0
    defects = np.full(n, 2.0 * math.pi)
    cell_areas = np.zeros(n)
    total_area = 0.0
    hessian = np.zeros((n, n)) if need_hessian else None

    for f in range(mesh.face_count):
        cycle = mesh.face_halfedges(f)
        edges = [int(mesh.edge_of[h]) for h in cycle]
        corners = [int(mesh.origin[h]) for h in cycle]
        geom = face_geometry(
            [lengths[e] for e in edges],
            [radii[c] for c in corners],
            [metric.inv[e] for e in edges],
        )
        potential_sum += triangle_potential(
            [log_radii[c] for c in corners], geom, [lambdas[e] for e in edges]
        )
        total_area += geom.area
        for c in range(3):
            defects[corners[c]] -= geom.angles[c]
            cell_areas[corners[c]] += geom.corner_areas[c]
        if need_hessian:
            local = angle_derivatives(geom)
            for a in range(3):
                for b in range(3):
                    hessian[corners[a], corners[b]] -= local[a, b]

    energy = -potential_sum + 2.0 * math.pi * float(np.sum(metric.u))

    with np.errstate(divide="ignore", invalid="ignore"):
        curvatures = np.where(cell_areas != 0.0, defects / cell_areas, np.nan)

    flat_edges = []
    if need_hessian:
        sums = edge_height_sums(mesh, metric)
        tol = delaunay_tolerance(lengths)
        flat_edges = [e for e in range(mesh.edge_count) if abs(sums[e]) <= tol]
        if flat_edges:
            warnings.warn(
                f"hessian evaluated with flat edges {flat_edges}; second "
                "derivatives may jump across the retriangulation boundary",
                FlatEdgeWarning,
                stacklevel=2,
            )

    return EnergyReport(
        energy=energy,
        defects=defects,
        cell_areas=cell_areas,
        total_area=total_area,
        curvatures=curvatures,
        hessian=hessian,
        faces=mesh.face_list(),
        flips=flips,
        flat_edges=flat_edges,
    )


def energy_gradient(mesh: Mesh, metric: DecoratedMetric) -> np.ndarray:
    """Angle defects, which are the energy's partials in the factor."""
    return evaluate(mesh, metric).defects


def energy_hessian(mesh: Mesh, metric: DecoratedMetric) -> np.ndarray:
    """Second derivative matrix; symmetric, rows sum to zero, PSD."""
    return evaluate(mesh, metric, need_hessian=True).hessian


def area_gradient(mesh: Mesh, metric: DecoratedMetric) -> tuple[float, np.ndarray]:
    """Total area and its per-vertex partials (the dual-cell areas)."""
    report = evaluate(mesh, metric)
    return report.total_area, report.cell_areas
