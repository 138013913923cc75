"""
Tangential angle structures.

TAS is the kernel of the per-tetrahedron sums and the per-edge incidence
sums over quads; STAS additionally annihilates the longitude index
functionals. Leading-trailing deformations Q_e and Q_gamma are explicit
integer vectors in TAS.
"""
import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import linalg

from cone.constants import QUADS_PER_TETRAHEDRON
from cone.models.angle_model import SpanReport
from cone.models.gluing_model import QuadIncidence
from cone.models.shape_model import QuadConvention
from cone.services.linear_algebra_services import (
    integer_nullspace,
    intersection_dimension,
    span_contains,
    span_dimension,
)

logger = logging.getLogger(__name__)


def tas_constraint_matrix(inc: QuadIncidence) -> np.ndarray:
    """(|T| + |E|) x 3|T| integer matrix: tetrahedron sums, then edge incidences."""
    n = inc.tet_count
    tet_rows = np.zeros((n, QUADS_PER_TETRAHEDRON * n), dtype=np.int64)
    for tet in range(n):
        tet_rows[tet, QUADS_PER_TETRAHEDRON * tet:QUADS_PER_TETRAHEDRON * (tet + 1)] = 1
    return np.vstack([tet_rows, inc.matrix.T])


def tas_basis(inc: QuadIncidence, exact: bool = True) -> List[np.ndarray]:
    """Basis of TAS; integer vectors when ``exact``, orthonormal floats otherwise."""
    constraints = tas_constraint_matrix(inc)
    if exact:
        return integer_nullspace(constraints.tolist(), constraints.shape[1])
    kernel = linalg.null_space(constraints.astype(float))
    return [kernel[:, k] for k in range(kernel.shape[1])]


def expected_tas_dimension(tet_count: int, edge_count: int, vertex_count: int) -> int:
    return vertex_count - edge_count + 2 * tet_count


def is_in_tas(inc: QuadIncidence, w) -> bool:
    w = np.asarray(w)
    if w.dtype.kind in 'iu':
        return not np.any(tas_constraint_matrix(inc) @ w)
    return bool(np.allclose(tas_constraint_matrix(inc) @ w, 0.0, atol=1e-10))


def leading_trailing_curve(ind, convention: QuadConvention) -> np.ndarray:
    """Q_gamma = sum_q ind(q) ((q')* - (q'')*), i.e. Q(r) = ind(r'') - ind(r')."""
    ind = np.asarray(ind, dtype=np.int64)
    succ = convention.successor_index()
    return ind[succ[succ]] - ind[succ]


def leading_trailing_edge(inc: QuadIncidence, edge: int, convention: QuadConvention) -> np.ndarray:
    return leading_trailing_curve(inc.column(edge), convention)


def edge_deformations(inc: QuadIncidence, convention: QuadConvention) -> List[np.ndarray]:
    return [leading_trailing_edge(inc, e, convention) for e in range(inc.edge_count)]


def pairing(ind_alpha, q_beta) -> int:
    """sum_q ind(q, alpha) Q_beta(q); twice the algebraic intersection number."""
    return int(np.dot(np.asarray(ind_alpha, dtype=np.int64), np.asarray(q_beta, dtype=np.int64)))


def stas_constraint_matrix(inc: QuadIncidence, longitudes: Sequence) -> np.ndarray:
    rows = [tas_constraint_matrix(inc)]
    if len(longitudes):
        rows.append(np.stack([np.asarray(ind, dtype=np.int64) for ind in longitudes]))
    return np.vstack(rows)


def stas_basis(inc: QuadIncidence, longitudes: Sequence) -> List[np.ndarray]:
    """Exact basis of STAS; a dimension other than |T| means the curve system is not a longitude set."""
    constraints = stas_constraint_matrix(inc, longitudes)
    basis = integer_nullspace(constraints.tolist(), constraints.shape[1])
    if len(basis) != inc.tet_count:
        logger.warning(f"STAS has dimension {len(basis)}, expected {inc.tet_count}; "
                       f"check the longitude system")
    return basis


def span_report(vectors: Sequence, subspaces: Optional[Dict[str, Sequence]] = None) -> SpanReport:
    """Exact span dimension of ``vectors`` and its containment in, intersection with
    and equality to each named subspace (given by spanning vectors)."""
    vectors = [np.asarray(v).tolist() for v in vectors]
    contained, trivial, equals = {}, {}, {}
    for name, spanning in (subspaces or {}).items():
        spanning = [np.asarray(v).tolist() for v in spanning]
        contained[name] = span_contains(spanning, vectors)
        trivial[name] = intersection_dimension(vectors, spanning) == 0
        equals[name] = contained[name] and span_contains(vectors, spanning)
    return SpanReport(
        dimension=span_dimension(vectors),
        vector_count=len(vectors),
        contained_in=contained,
        trivial_intersection=trivial,
        equals=equals,
    )
