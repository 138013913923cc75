"""
Gluing system of a triangulation: quad incidence i(q, e), the complex and
log-curvature maps with their Jacobians, the Neumann matrix and the
combinatorial Gauss-Bonnet identities.
"""
import itertools
import logging
import math
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from django.conf import settings

from cone.constants import LEVEL_MARKS, QUADS_PER_TETRAHEDRON, quad_index, quad_slot
from cone.exceptions import DegenerateShape, NotPositivelyOriented, ValidationError
from cone.models.gluing_model import QuadIncidence, VertexCurvatureCheck
from cone.models.shape_model import QuadConvention, ShapeAssignment
from cone.models.triangulation_model import Triangulation
from cone.services.triangulation_services import edge_classes, vertex_classes

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# Guard for the curvature-fiber enumeration.
MAX_FIBER_CANDIDATES = 2_000_000


@lru_cache(maxsize=128)
def quad_incidence(t: Triangulation) -> QuadIncidence:
    """i(q, e): number of tetrahedron edges of class e facing quad q."""
    edges = edge_classes(t)
    matrix = np.zeros((QUADS_PER_TETRAHEDRON * t.tet_count, len(edges)), dtype=np.int64)
    for edge in edges:
        for tet, (a, b) in edge.members:
            matrix[quad_index(tet, quad_slot(a, b)), edge.index] += 1
    return QuadIncidence(matrix=matrix, edges=edges)


def require_positive(z: ShapeAssignment) -> np.ndarray:
    """Flat quad values of ``z``; raises unless every one lies in the upper half-plane."""
    values = z.quad_values()
    bad = [int(q) for q in np.flatnonzero(~np.isfinite(values) | (values.imag <= 0))]
    if bad:
        raise NotPositivelyOriented(
            f"{len(bad)} quad parameter(s) outside the open upper half-plane",
            quads=bad,
        )
    return values


def require_nondegenerate(z: ShapeAssignment) -> np.ndarray:
    preferred = z.preferred_values
    bad = np.flatnonzero(~np.isfinite(preferred) | (preferred == 0) | (preferred == 1))
    if bad.size:
        quads = [int(quad_index(tet, z.convention.preferred[tet])) for tet in bad]
        raise DegenerateShape(f"Shape parameter equal to 0, 1 or infinity at tetrahedra {list(bad)}",
                              quads=quads)
    return z.quad_values()


def log_curvature(inc: QuadIncidence, z: ShapeAssignment) -> np.ndarray:
    """G(z)(e) = sum_q i(q, e) log z(q), principal branch."""
    values = require_positive(z)
    return inc.matrix.T @ np.log(values)


def complex_curvature(inc: QuadIncidence, z: ShapeAssignment) -> np.ndarray:
    """c(z)(e) = prod_q z(q)^i(q, e)."""
    values = require_nondegenerate(z)
    return np.prod(values[:, None] ** inc.matrix, axis=0)


def log_derivatives(z: ShapeAssignment) -> np.ndarray:
    """d log z(q) / d z_tet for every flat quad q, with z_tet the preferred parameter."""
    w = z.preferred_values
    levels = np.stack([1.0 / w, 1.0 / (1.0 - w), 1.0 / (w * (w - 1.0))], axis=1)
    derivatives = np.empty(QUADS_PER_TETRAHEDRON * z.tet_count, dtype=complex)
    derivatives[z.convention.level_index().reshape(-1)] = levels.reshape(-1)
    return derivatives


def _log_chain(z: ShapeAssignment) -> np.ndarray:
    """(3|T| x |T|) matrix placing d log z(q) / d z_tet in the column of q's tetrahedron."""
    derivatives = log_derivatives(z)
    quads = QUADS_PER_TETRAHEDRON * z.tet_count
    chain = np.zeros((quads, z.tet_count), dtype=complex)
    chain[np.arange(quads), np.arange(quads) // QUADS_PER_TETRAHEDRON] = derivatives
    return chain


def weighted_log_jacobian(weights: np.ndarray, z: ShapeAssignment) -> np.ndarray:
    """Jacobian of z -> weights^T log z(q) with respect to the preferred parameters.

    ``weights`` has one row per flat quad; the result has one row per column
    of ``weights`` and one column per tetrahedron.
    """
    require_positive(z)
    return np.asarray(weights).T @ _log_chain(z)


def jacobian_term_scale(weights: np.ndarray, z: ShapeAssignment) -> float:
    """Largest entry of |weights|^T |chain|: the size of the terms summed into the Jacobian."""
    require_positive(z)
    return float(np.max(np.abs(np.asarray(weights)).T @ np.abs(_log_chain(z)), initial=0.0))


def jacobian_G(inc: QuadIncidence, z: ShapeAssignment) -> np.ndarray:
    """dG(z) as an |E| x |T| complex matrix in the preferred parameters of ``z``."""
    return weighted_log_jacobian(inc.matrix, z)


def finite_difference_jacobian(func: Callable[[ShapeAssignment], np.ndarray], z: ShapeAssignment,
                               step: float = None) -> np.ndarray:
    """Central differences of a holomorphic map along each preferred parameter."""
    step = settings.CONE_FINITE_DIFFERENCE_STEP if step is None else step
    base = z.preferred_values
    columns = []
    for tet in range(z.tet_count):
        shift = np.zeros_like(base)
        shift[tet] = step
        forward = func(z.with_values(base + shift))
        backward = func(z.with_values(base - shift))
        columns.append((forward - backward) / (2.0 * step))
    return np.stack(columns, axis=1)


def neumann_matrix(inc: QuadIncidence, convention: QuadConvention) -> np.ndarray:
    """B with rows i(p, e) - i(p', e) and i(p', e) - i(p'', e) per tetrahedron, p preferred."""
    rows = []
    for tet in range(inc.tet_count):
        p, p1, p2 = (quad_index(tet, slot) for slot in convention.level_slots(tet))
        rows.append(inc.matrix[p] - inc.matrix[p1])
        rows.append(inc.matrix[p1] - inc.matrix[p2])
    return np.asarray(rows, dtype=np.int64).reshape(2 * inc.tet_count, inc.edge_count)


def incidence_row_sums_ok(inc: QuadIncidence) -> bool:
    return bool(np.all(inc.matrix.sum(axis=1) == 2))


def edge_ends_by_vertex(t: Triangulation) -> Dict[int, List[int]]:
    """Edge class indices ending at each vertex class, with multiplicity."""
    ends = {v.index: [] for v in vertex_classes(t)}
    for edge in edge_classes(t):
        for endpoint in edge.endpoints:
            ends[endpoint].append(edge.index)
    return ends


def gauss_bonnet_check(t: Triangulation, inc: QuadIncidence, z: ShapeAssignment,
                       tol: float = None) -> List[VertexCurvatureCheck]:
    """Sum over edge ends at v of (2 pi - Im G(e)) against 2 pi chi(Lk(v))."""
    tol = settings.CONE_IDENTITY_TOLERANCE if tol is None else tol
    g = log_curvature(inc, z)
    return gauss_bonnet_from_log_curvature(t, g, tol)


def gauss_bonnet_from_log_curvature(t: Triangulation, g: np.ndarray, tol: float = None) -> List[VertexCurvatureCheck]:
    tol = settings.CONE_IDENTITY_TOLERANCE if tol is None else tol
    ends = edge_ends_by_vertex(t)
    checks = []
    for vertex in vertex_classes(t):
        defect = float(sum(TWO_PI - g[e].imag for e in ends[vertex.index]))
        expected = TWO_PI * vertex.link.euler_characteristic
        checks.append(VertexCurvatureCheck(
            vertex_class=vertex.index,
            angle_sum_defect=defect,
            expected=expected,
            ok=abs(defect - expected) <= tol,
        ))
    return checks


def angle_sum_defect(t: Triangulation, g: np.ndarray) -> float:
    """|sum_e G(e) - 2 pi i |T||."""
    return float(abs(np.sum(g) - 2j * math.pi * t.tet_count))


# Monomials

def format_monomial(powers: Dict[Tuple[int, int], int]) -> str:
    """Render {(tet, level): power} as e.g. "z0 z1'^2 z2''^-1", factors sorted by (tet, level)."""
    factors = []
    for (tet, level), power in sorted(powers.items()):
        if power == 0:
            continue
        name = f'z{tet}{LEVEL_MARKS[level]}'
        factors.append(name if power == 1 else f'{name}^{power}')
    return ' '.join(factors) if factors else '1'


def monomial_of_vector(vector: Sequence[int], convention: QuadConvention) -> str:
    """Monomial prod_q z(q)^vector(q) in the level names of ``convention``."""
    powers = {}
    for q, power in enumerate(vector):
        if power:
            tet, slot = divmod(q, QUADS_PER_TETRAHEDRON)
            powers[(tet, convention.level_of(tet, slot))] = int(power)
    return format_monomial(powers)


def curvature_monomials(inc: QuadIncidence, convention: QuadConvention,
                        edge_order: Sequence[int] = None) -> List[str]:
    """Monomials of c(z), optionally listed in a relabelled edge order."""
    order = range(inc.edge_count) if edge_order is None else edge_order
    return [monomial_of_vector(inc.column(e), convention) for e in order]


def reorder_edges(values, edge_order: Sequence[int] = None):
    if edge_order is None:
        return values
    return [values[e] for e in edge_order]


# Curvature fiber

def curvature_fiber_lifts(t: Triangulation, inc: QuadIncidence, c: np.ndarray,
                          tol: float = None) -> List[np.ndarray]:
    """All log-curvature vectors u with exp(u) = c compatible with positive shapes.

    A lift must have 0 < Im u(e) < valence(e) pi on every edge, total
    2 pi i |T| and satisfy Gauss-Bonnet at every vertex class. Distinct lifts
    with equal c lie on disjoint level sets of G.
    """
    tol = settings.CONE_IDENTITY_TOLERANCE if tol is None else tol
    c = np.asarray(c, dtype=complex)
    base = np.log(c)
    valences = inc.matrix.sum(axis=0)

    choices = []
    for e in range(inc.edge_count):
        upper = valences[e] * math.pi
        low = math.ceil((tol - base[e].imag) / TWO_PI)
        high = math.floor((upper - tol - base[e].imag) / TWO_PI)
        choices.append(range(low, high + 1))

    candidates = math.prod(len(r) for r in choices)
    if candidates > MAX_FIBER_CANDIDATES:
        raise ValidationError(f"Curvature fiber has {candidates} branch combinations; too many to enumerate")

    lifts = []
    for winding in itertools.product(*choices):
        u = base + 2j * math.pi * np.asarray(winding, dtype=float)
        if angle_sum_defect(t, u) > tol:
            continue
        if all(check.ok for check in gauss_bonnet_from_log_curvature(t, u, tol)):
            lifts.append(u)
    logger.info(f"Curvature fiber: {len(lifts)} admissible lifts out of {candidates} branch choices")
    return lifts
