"""Damped Newton solver for the constant-curvature conformal factor.

The unit-area constraint is folded into a scale-invariant objective: the
energy minus ``pi * chi`` times the log of the total area.  Its gradient
vanishes exactly when the defect/area quotient is the same at every
vertex, so the constrained problem becomes an unconstrained minimization
with a one-dimensional kernel (global scaling), removed by pinning the
factor at vertex 0 and re-normalizing the area after every accepted step.
The zero-Euler-characteristic case is the same code path with a vanishing
multiplier: the objective reduces to the plain energy and the target
curvature to zero.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .energy import EnergyReport, evaluate
from .errors import (
    DegenerateTriangleError,
    FlipLimitExceededError,
    NoOrthogonalCircleError,
    NotConvergedError,
    PositiveEulerError,
    SeparationLostError,
)
from .mesh import Mesh, euler_characteristic
from .metric import DecoratedMetric

logger = logging.getLogger(__name__)

FD_STEP = 1e-5
MIN_STEP = 1e-12
# geometry failures at a trial point mean the step left the reachable
# region; the line search treats them like a failed decrease
_TRIAL_ERRORS = (
    DegenerateTriangleError,
    SeparationLostError,
    NoOrthogonalCircleError,
    FlipLimitExceededError,
)


@dataclass
class SolverOptions:
    residual_tol: float = 1e-10
    max_iters: int = 100
    backtrack_factor: float = 0.5
    armijo_slope: float = 1e-4
    fd_jacobian: bool = True        # finite-difference area Jacobian in the Hessian
    seed_u: np.ndarray | None = None

    def __post_init__(self):
        if self.residual_tol <= 0.0:
            raise ValueError("residual_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class UniformizeResult:
    u: np.ndarray
    faces: list
    curvatures: np.ndarray
    defects: np.ndarray
    cell_areas: np.ndarray
    constant_curvature: float      # defect sum / area sum at the returned factor
    total_area: float
    chi: int
    iterations: int
    residual: float
    converged: bool
    residual_history: list = field(default_factory=list)
    flip_history: list = field(default_factory=list)
    energy_history: list = field(default_factory=list)
    defect_sum_history: list = field(default_factory=list)


def scale_normalize(mesh: Mesh, metric: DecoratedMetric) -> DecoratedMetric:
    """Shift the factor uniformly so the total area becomes one.

    The mesh must already be weighted Delaunay; a global shift scales every
    length by the same amount, so the triangulation stays valid.
    """
    total = evaluate(mesh, metric, run_delaunay=False).total_area
    shift = -0.5 * math.log(total)
    return DecoratedMetric(metric.radii0, metric.inv.copy(), metric.u + shift)


def reduced_energy(mesh: Mesh, metric: DecoratedMetric) -> float:
    """Scale-invariant objective; mutates mesh/metric through the flip phase."""
    chi = euler_characteristic(mesh)
    if chi > 0:
        raise PositiveEulerError(f"Euler characteristic {chi} > 0 is unsupported")
    report = evaluate(mesh, metric)
    return report.energy - math.pi * chi * math.log(report.total_area)


def _reduced_gradient(chi: int, report: EnergyReport) -> np.ndarray:
    return report.defects - math.pi * chi * report.cell_areas / report.total_area


def _residual_norm(report: EnergyReport) -> float:
    """Deviation from proportionality of defects and areas; scale invariant."""
    target = float(np.sum(report.defects)) / float(np.sum(report.cell_areas))
    return float(np.max(np.abs(report.defects - target * report.cell_areas)))


def _trial(mesh: Mesh, metric: DecoratedMetric, du: np.ndarray):
    """Evaluate at factor + du on copies; returns (value, mesh, metric, report)."""
    trial_mesh = mesh.copy()
    trial_metric = DecoratedMetric(metric.radii0, metric.inv.copy(), metric.u + du)
    report = evaluate(trial_mesh, trial_metric)
    chi = euler_characteristic(trial_mesh)
    value = report.energy - math.pi * chi * math.log(report.total_area)
    return value, trial_mesh, trial_metric, report


def _area_jacobian(mesh: Mesh, metric: DecoratedMetric, n: int) -> np.ndarray:
    """Central-difference Jacobian of the cell areas in the factor."""
    jac = np.zeros((n, n))
    for j in range(n):
        probe = np.zeros(n)
        probe[j] = FD_STEP
        _, _, _, up = _trial(mesh, metric, probe)
        _, _, _, dn = _trial(mesh, metric, -probe)
        jac[:, j] = (up.cell_areas - dn.cell_areas) / (2.0 * FD_STEP)
    return 0.5 * (jac + jac.T)


def _search_direction(hessian_model, gradient, pinned=0):
    """Newton step on the pinned system, or None when the solve is unusable."""
    n = len(gradient)
    free = [i for i in range(n) if i != pinned]
    if not free:
        return None
    try:
        step_free = np.linalg.solve(
            hessian_model[np.ix_(free, free)], -gradient[free]
        )
    except np.linalg.LinAlgError:
        return None
    if not np.isfinite(step_free).all():
        return None
    direction = np.zeros(n)
    direction[free] = step_free
    return direction


def uniformize(
    mesh: Mesh, metric: DecoratedMetric, options: SolverOptions | None = None
) -> UniformizeResult:
    """Find the factor with constant defect/area curvature; area normalized to 1.

    Operates on copies; the caller's mesh and metric are untouched.  Raises
    PositiveEulerError for chi > 0 and NotConvergedError (carrying the
    partial trace) when the iteration budget runs out.
    """
    options = options or SolverOptions()
    chi = euler_characteristic(mesh)
    if chi > 0:
        raise PositiveEulerError(
            f"Euler characteristic {chi} > 0: no constant-curvature target"
        )
    multiplier = math.pi * chi

    work_mesh = mesh.copy()
    work = metric.copy()
    if options.seed_u is not None:
        work = DecoratedMetric(work.radii0, work.inv, np.asarray(options.seed_u, float))
    n = work_mesh.vertex_count

    history: dict[str, list] = {"residual": [], "flips": [], "energy": [], "defect_sum": []}
    report = None
    iteration = 0

    def result_from(report: EnergyReport, converged: bool, residual: float):
        total = float(np.sum(report.cell_areas))
        return UniformizeResult(
            u=work.u.copy(),
            faces=report.faces,
            curvatures=report.curvatures.copy(),
            defects=report.defects.copy(),
            cell_areas=report.cell_areas.copy(),
            constant_curvature=float(np.sum(report.defects)) / total,
            total_area=report.total_area,
            chi=chi,
            iterations=iteration,
            residual=residual,
            converged=converged,
            residual_history=history["residual"],
            flip_history=history["flips"],
            energy_history=history["energy"],
            defect_sum_history=history["defect_sum"],
        )

    flips_this_iter = 0
    for iteration in range(options.max_iters + 1):
        report = evaluate(work_mesh, work, need_hessian=True)
        # re-center the scale: angles, defects and the Hessian are shift
        # invariant, areas pick up the square of the shift
        shift = -0.5 * math.log(report.total_area)
        work.u = work.u + shift
        grow = math.exp(2.0 * shift)
        report.cell_areas = report.cell_areas * grow
        report.total_area = report.total_area * grow
        report.energy = report.energy + 2.0 * shift * math.pi * chi
        report.curvatures = report.defects / report.cell_areas

        target = float(np.sum(report.defects)) / float(np.sum(report.cell_areas))
        residual_vec = report.defects - target * report.cell_areas
        residual = float(np.max(np.abs(residual_vec)))
        curvature_gap = float(np.max(np.abs(report.curvatures - target)))

        history["residual"].append(residual)
        history["flips"].append(flips_this_iter)
        history["energy"].append(
            report.energy - multiplier * math.log(report.total_area)
        )
        history["defect_sum"].append(float(np.sum(report.defects)))

        if residual <= options.residual_tol and curvature_gap <= options.residual_tol * max(
            1.0, abs(target)
        ):
            logger.info(
                "converged after %d iterations, residual %.3e", iteration, residual
            )
            return result_from(report, True, residual)
        if iteration == options.max_iters:
            break

        gradient = _reduced_gradient(chi, report)
        hessian_model = report.hessian.copy()
        if multiplier != 0.0:
            if options.fd_jacobian:
                area_jac = _area_jacobian(work_mesh, work, n)
                hessian_model -= multiplier * area_jac / report.total_area
            hessian_model += multiplier * np.outer(
                report.cell_areas, report.cell_areas
            ) / report.total_area**2

        current = history["energy"][-1]
        accepted = None
        for direction in filter(
            lambda d: d is not None,
            [_search_direction(hessian_model, gradient), -gradient],
        ):
            slope = float(gradient @ direction)
            if slope >= 0.0:
                continue
            step = 1.0
            noise = 8.0 * np.finfo(float).eps * abs(current)
            while step >= MIN_STEP:
                try:
                    value, trial_mesh, trial_metric, trial_report = _trial(
                        work_mesh, work, step * direction
                    )
                except _TRIAL_ERRORS:
                    step *= options.backtrack_factor
                    continue
                # Armijo while the predicted decrease is measurable; at the
                # rounding floor of the objective require a genuine
                # residual contraction instead
                predicted = options.armijo_slope * step * slope
                if abs(predicted) > noise:
                    ok = value <= current + predicted
                else:
                    ok = (
                        value <= current + noise
                        and _residual_norm(trial_report) <= 0.9 * residual
                    )
                if ok:
                    accepted = (trial_mesh, trial_metric, trial_report)
                    break
                step *= options.backtrack_factor
            if accepted:
                break
        if accepted is None:
            raise NotConvergedError(
                f"line search stalled at iteration {iteration}, residual {residual:.3e}",
                result=result_from(report, False, residual),
            )
        work_mesh, work, trial_report = accepted
        flips_this_iter = trial_report.flips

    raise NotConvergedError(
        f"no convergence within {options.max_iters} iterations, "
        f"residual {history['residual'][-1]:.3e}",
        result=result_from(report, False, history["residual"][-1]),
    )
