"""
Damped Gauss-Newton for (G, H_L)(z) = (u, t) over positively oriented shapes,
and predictor-corrector continuation along H_L inside a level set G^-1(u).
"""
import logging
import math
from typing import List, Sequence, Union

import numpy as np
from django.conf import settings
from scipy import linalg

from cone.exceptions import (
    ConvergenceError,
    InfeasibleTarget,
    LeftDomain,
    MaxIterations,
    NotPositivelyOriented,
    RankDeficientJacobian,
    StalledIteration,
    StepTooLarge,
)
from cone.models.shape_model import ShapeAssignment
from cone.models.solver_model import PositivityReport, SolveResult, SolveTarget
from cone.models.triangulation_model import Triangulation
from cone.services.gluing_services import jacobian_G, jacobian_term_scale, log_curvature, quad_incidence
from cone.services.linear_algebra_services import rank_numeric
from cone.services.peripheral_services import boundary_map, curve_matrix, jacobian_H
from cone.services.triangulation_services import vertex_classes
from cone.utils.logging_config import SolverEventLogger

logger = logging.getLogger('cone.solver')
events = SolverEventLogger()


def positivity_check(z: ShapeAssignment) -> PositivityReport:
    """Im z(q) for every flat quad; positive iff all are finite and > 0."""
    values = z.quad_values()
    margins = np.where(np.isfinite(values), values.imag, -np.inf)
    min_margin = float(margins.min()) if margins.size else math.inf
    return PositivityReport(
        positive=bool(np.all(margins > 0)),
        margins=tuple(float(m) for m in margins),
        min_margin=min_margin,
    )


def check_feasibility(target: SolveTarget, tet_count: int, tol: float = None) -> float:
    """Defect of the identity sum_e u(e) = 2 pi i |T|; raises when it exceeds ``tol``."""
    tol = settings.CONE_FEASIBILITY_TOLERANCE if tol is None else tol
    defect = float(abs(np.sum(target.u) - 2j * math.pi * tet_count))
    if defect > tol:
        logger.warning(f"Target violates the angle-sum identity by {defect:.3e}; the solve cannot converge")
        raise InfeasibleTarget(
            f"Sum of target log-curvatures differs from 2*pi*i*{tet_count} by {defect:.3e}",
            defect=defect,
        )
    return defect


class GaussNewtonSolver:
    """Solver bound to one triangulation and one curve system."""

    def __init__(self, t: Triangulation, curves: Sequence = (), tol: float = None,
                 max_iterations: int = None, min_step: float = None, rank_tol: float = None):
        self.triangulation = t
        self.incidence = quad_incidence(t)
        self.curves = list(curves)
        self.weights = (np.hstack([self.incidence.matrix, curve_matrix(self.curves)]) if self.curves
                        else self.incidence.matrix)
        self.tol = settings.CONE_SOLVER_TOLERANCE if tol is None else tol
        self.max_iterations = settings.CONE_MAX_ITERATIONS if max_iterations is None else max_iterations
        self.min_step = settings.CONE_MIN_STEP if min_step is None else min_step
        self.rank_tol = settings.CONE_RANK_TOLERANCE if rank_tol is None else rank_tol
        self.armijo = settings.CONE_ARMIJO_FACTOR

        genus_sum = sum(v.genus for v in vertex_classes(t))
        if len(self.curves) != genus_sum:
            logger.warning(f"{len(self.curves)} curve(s) supplied for a genus sum of {genus_sum}")

    def values(self, z: ShapeAssignment) -> np.ndarray:
        return np.concatenate([log_curvature(self.incidence, z), boundary_map(self.curves, z)])

    def residual(self, z: ShapeAssignment, target: SolveTarget) -> np.ndarray:
        return self.values(z) - target.stacked()

    def jacobian(self, z: ShapeAssignment) -> np.ndarray:
        return np.vstack([jacobian_G(self.incidence, z), jacobian_H(self.curves, z)])

    def _check_rank(self, jacobian: np.ndarray, z: ShapeAssignment, result: SolveResult):
        rank = rank_numeric(jacobian, self.rank_tol, scale=jacobian_term_scale(self.weights, z))
        if rank < self.triangulation.tet_count:
            raise RankDeficientJacobian(
                f"Stacked Jacobian has numerical rank {rank} < {self.triangulation.tet_count}",
                rank=rank, expected=self.triangulation.tet_count, last_result=result,
            )

    def solve(self, target: SolveTarget, start: ShapeAssignment) -> SolveResult:
        n = self.triangulation.tet_count
        if target.u.shape[0] != self.incidence.edge_count or target.t.shape[0] != len(self.curves):
            raise ConvergenceError(
                f"Target has {target.u.shape[0]} + {target.t.shape[0]} entries, expected "
                f"{self.incidence.edge_count} + {len(self.curves)}",
                error_code="TARGET_SHAPE_MISMATCH",
            )
        check_feasibility(target, n)
        if not positivity_check(start).positive:
            raise NotPositivelyOriented("Starting shapes are not positively oriented")

        z = start
        r = self.residual(z, target)
        result = SolveResult(z=z, residual_norm=float(np.max(np.abs(r))), iterations=0, converged=False,
                             residual_history=[float(np.max(np.abs(r)))])
        barrier_binding = False

        for iteration in range(1, self.max_iterations + 1):
            jacobian = self.jacobian(z)
            self._check_rank(jacobian, z, result)
            if result.residual_norm <= self.tol:
                result.converged = True
                break

            delta = linalg.lstsq(jacobian, -r, lapack_driver='gelsy')[0]
            norm = float(np.linalg.norm(r))
            step = 1.0
            barrier_binding = False
            while True:
                candidate = z.with_values(z.preferred_values + step * delta)
                if not positivity_check(candidate).positive:
                    barrier_binding = True
                    events.log_step_rejected(iteration, step, 'positivity')
                else:
                    r_candidate = self.residual(candidate, target)
                    sup = float(np.max(np.abs(r_candidate)))
                    if np.linalg.norm(r_candidate) <= (1.0 - self.armijo * step) * norm or sup <= self.tol:
                        break
                    events.log_step_rejected(iteration, step, 'armijo')
                step /= 2.0
                if step < self.min_step:
                    events.log_solve_finished(False, iteration, result.residual_norm)
                    if barrier_binding:
                        raise LeftDomain(
                            f"No positively oriented descent step above {self.min_step:.3e}",
                            residual=result.residual_norm, last_result=result,
                        )
                    raise StalledIteration(residual=result.residual_norm, last_result=result)

            z, r = candidate, r_candidate
            result = SolveResult(
                z=z,
                residual_norm=sup,
                iterations=iteration,
                converged=False,
                residual_history=result.residual_history + [sup],
                step_history=result.step_history + [step],
            )
            events.log_iteration(iteration, sup, step)
        else:
            if result.residual_norm <= self.tol:
                self._check_rank(self.jacobian(z), z, result)
                result.converged = True
            else:
                events.log_solve_finished(False, result.iterations, result.residual_norm)
                if barrier_binding:
                    raise LeftDomain(residual=result.residual_norm, last_result=result)
                raise MaxIterations(iterations=result.iterations, residual=result.residual_norm,
                                    last_result=result)

        events.log_solve_finished(True, result.iterations, result.residual_norm)
        return result


def gauss_newton_solve(t: Triangulation, curves: Sequence, target: SolveTarget, start: ShapeAssignment,
                       **options) -> SolveResult:
    return GaussNewtonSolver(t, curves, **options).solve(target, start)


def trace_level_set(t: Triangulation, curves: Sequence, u, start: Union[ShapeAssignment, SolveResult],
                    t_path: Sequence, tol: float = None, max_corrector_iterations: int = None,
                    **options) -> List[SolveResult]:
    """Follow G^-1(u) through the holonomy targets in ``t_path``.

    The start is first corrected onto (u, t_path[0]). Each later point is
    predicted along the tangent with G held fixed and corrected by
    Gauss-Newton; LeftDomain and StepTooLarge carry the last accepted point.
    """
    max_corrector_iterations = (settings.CONE_CORRECTOR_MAX_ITERATIONS
                                if max_corrector_iterations is None else max_corrector_iterations)
    solver = GaussNewtonSolver(t, curves, tol=tol, max_iterations=max_corrector_iterations, **options)
    u = np.asarray(u, dtype=complex)
    z = start.z if isinstance(start, SolveResult) else start
    path = [np.asarray(point, dtype=complex).reshape(-1) for point in t_path]
    if not path:
        return []

    results: List[SolveResult] = []
    previous = path[0]
    for index, holonomy_target in enumerate(path):
        target = SolveTarget(u=u, t=holonomy_target)
        last = results[-1] if results else None

        if index > 0:
            direction = np.concatenate([np.zeros(solver.incidence.edge_count, dtype=complex),
                                        holonomy_target - previous])
            delta = linalg.lstsq(solver.jacobian(z), direction, lapack_driver='gelsy')[0]
            step = 1.0
            while not positivity_check(z.with_values(z.preferred_values + step * delta)).positive:
                step /= 2.0
                if step < solver.min_step:
                    raise LeftDomain(f"Predictor for point {index} cannot stay positively oriented",
                                     residual=last.residual_norm if last else None, last_result=last)
            z = z.with_values(z.preferred_values + step * delta)

        try:
            result = solver.solve(target, z)
        except LeftDomain as exc:
            raise LeftDomain(f"Continuation left the positively oriented region at point {index}",
                             residual=exc.details.get('residual'), last_result=last)
        except (MaxIterations, StalledIteration):
            raise StepTooLarge(f"Corrector failed at point {index}; refine the path", index=index,
                               last_result=last)

        level_defect = float(np.max(np.abs(log_curvature(solver.incidence, result.z) - u)))
        margin = positivity_check(result.z).min_margin
        events.log_continuation_step(index, level_defect, margin)
        results.append(result)
        z = result.z
        previous = holonomy_target
    return results
