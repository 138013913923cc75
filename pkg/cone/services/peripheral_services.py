"""
Normal curves on vertex links.

A step crosses one link triangle at (tet, vertex), entering through the side
in one face and leaving through the side in another; it cuts off the corner
x on the edge shared by both faces. The step contributes to the quad faced by
the tetrahedron edge {vertex, x}, with sign +1 when the arc turns
anticlockwise around x in the oriented link triangle.
"""
import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np

from cone.constants import QUADS_PER_TETRAHEDRON, face_opposite, quad_index, quad_slot
from cone.exceptions import InvalidPath, NotSameLink, ValidationError
from cone.models.curve_model import ArcPath, CurveSpec, Step
from cone.models.gluing_model import QuadIncidence
from cone.models.shape_model import QuadConvention, ShapeAssignment
from cone.models.triangulation_model import EdgeClass, Triangulation
from cone.services.gluing_services import require_positive, weighted_log_jacobian
from cone.services.linear_algebra_services import lattice_contains
from cone.services.triangulation_services import corner_class_index, link_ccw, link_corner_order

logger = logging.getLogger(__name__)


def validate_path(t: Triangulation, path: ArcPath) -> ArcPath:
    """Check that every step is a corner arc and consecutive steps are glued."""
    if not path.steps:
        raise InvalidPath("Arc path has no steps")
    corners = corner_class_index(t)
    for k, step in enumerate(path.steps):
        if not 0 <= step.tet < t.tet_count or not 0 <= step.vertex < 4:
            raise InvalidPath(f"Step {k} refers to a missing corner", step=k)
        link_face = face_opposite(step.vertex)
        if step.entering_face == step.exiting_face or link_face in (step.entering_face, step.exiting_face):
            raise InvalidPath(f"Step {k} does not cross two sides of the link triangle", step=k)
        if corners[(step.tet, step.vertex)] != path.vertex_class:
            raise InvalidPath(f"Step {k} lies outside vertex class {path.vertex_class}", step=k)

        following = path.steps[(k + 1) % len(path.steps)]
        pairing = t.glue(step.tet, step.exiting_face)
        if (pairing.target_tet, pairing.target_face, pairing.perm[step.vertex]) != (
                following.tet, following.entering_face, following.vertex):
            raise InvalidPath(f"Step {k} exits through a side not glued to the entry of step "
                              f"{(k + 1) % len(path.steps)}", step=k)
    return path


def step_sign(step: Step, orientation: int = 1) -> int:
    """+1 when the arc runs anticlockwise around its isolated corner."""
    ccw = link_ccw(step.vertex, step.isolated_corner, step.exiting_corner, step.entering_corner, orientation)
    return 1 if ccw else -1


def index_vector(t: Triangulation, path: ArcPath, orientation: int = 1) -> np.ndarray:
    """ind(q, path) summed over the steps of a closed arc path."""
    validate_path(t, path)
    vector = np.zeros(QUADS_PER_TETRAHEDRON * t.tet_count, dtype=np.int64)
    for step in path.steps:
        q = quad_index(step.tet, quad_slot(step.vertex, step.isolated_corner))
        vector[q] += step_sign(step, orientation)
    return vector


def index_vector_from_entries(entries: Sequence[Tuple[int, int, int]], convention: QuadConvention) -> np.ndarray:
    """Index vector from (tet, level, coefficient) entries, level 0/1/2 for z, z', z''."""
    vector = np.zeros(QUADS_PER_TETRAHEDRON * convention.tet_count, dtype=np.int64)
    for tet, level, coefficient in entries:
        if not 0 <= tet < convention.tet_count or level not in (0, 1, 2):
            raise ValidationError(f"Curve entry ({tet}, {level}) is outside the triangulation", field='entries')
        vector[quad_index(tet, convention.level_slots(tet)[level])] += int(coefficient)
    return vector


def reverse(path: ArcPath) -> ArcPath:
    return path.reversed()


def curve_around_edge_endpoint(t: Triangulation, edge: EdgeClass, endpoint: int = 0,
                               orientation: int = 1, link_orientation: int = 1) -> ArcPath:
    """Normal loop encircling one end of ``edge`` in the link of that end.

    With ``orientation`` +1 the loop runs anticlockwise, so its index vector
    is the incidence column of the edge.
    """
    if endpoint not in (0, 1):
        raise ValidationError("Endpoint selector must be 0 or 1", field='endpoint')
    tet, (a, b) = edge.representative
    v, x = (a, b) if endpoint == 0 else (b, a)
    w_in, w_out = [w for w in range(4) if w not in (v, x)]
    if not link_ccw(v, x, w_out, w_in, link_orientation):
        w_in, w_out = w_out, w_in

    start = (tet, v, x, w_in)
    state = start
    steps = []
    while True:
        tet, v, x, w_in = state
        w_out = ({0, 1, 2, 3} - {v, x, w_in}).pop()
        step = Step(tet, v, face_opposite(w_in), face_opposite(w_out))
        steps.append(step)
        pairing = t.glue(tet, step.exiting_face)
        state = (pairing.target_tet, pairing.perm[v], pairing.perm[x], pairing.perm[w_out])
        if state == start:
            break

    path = ArcPath(vertex_class=edge.endpoints[endpoint], steps=tuple(steps))
    return path if orientation == 1 else path.reversed()


def holonomy(ind: np.ndarray, z: ShapeAssignment) -> complex:
    """h(z) = sum_q ind(q) log z(q)."""
    return complex(np.asarray(ind) @ np.log(require_positive(z)))


def curve_matrix(curves: Sequence) -> np.ndarray:
    """Index vectors stacked as columns (3|T| x |L|)."""
    vectors = [c.index_vector if isinstance(c, CurveSpec) else np.asarray(c, dtype=np.int64) for c in curves]
    if not vectors:
        return np.zeros((0, 0), dtype=np.int64)
    return np.stack(vectors, axis=1)


def boundary_map(curves: Sequence, z: ShapeAssignment) -> np.ndarray:
    """H_L(z): log holonomies of the curve system."""
    if not curves:
        return np.zeros(0, dtype=complex)
    return curve_matrix(curves).T @ np.log(require_positive(z))


def jacobian_H(curves: Sequence, z: ShapeAssignment) -> np.ndarray:
    if not curves:
        return np.zeros((0, z.tet_count), dtype=complex)
    return weighted_log_jacobian(curve_matrix(curves), z)


def homology_gap_check(inc: QuadIncidence, ind_a: np.ndarray, ind_b: np.ndarray) -> bool:
    """Whether ind_a - ind_b is an integer combination of incidence columns.

    Then h_a - h_b is the same combination of G(z)(e), whatever z is.
    """
    return lattice_contains(inc.matrix, np.asarray(ind_a) - np.asarray(ind_b))


# Intersection numbers

def _side_key(tet: int, vertex: int, face: int) -> Tuple[int, int, int]:
    return tet, vertex, face


def _crossings(t: Triangulation, path: ArcPath):
    """Points where the path crosses glued sides: (exit side, entry side) per step."""
    crossings = []
    for step in path.steps:
        pairing = t.glue(step.tet, step.exiting_face)
        exit_side = _side_key(step.tet, step.vertex, step.exiting_face)
        entry_side = _side_key(pairing.target_tet, pairing.perm[step.vertex], pairing.target_face)
        crossings.append((exit_side, entry_side))
    return crossings


def _triangle_sides(vertex: int, orientation: int) -> Dict[int, int]:
    """Side index of each face around the link triangle, numbered anticlockwise.

    With anticlockwise corners (a, b, c), side 0 runs a -> b, side 1 b -> c
    and side 2 c -> a.
    """
    a, b, c = link_corner_order(vertex, orientation)
    return {face_opposite(c): 0, face_opposite(a): 1, face_opposite(b): 2}


def _in_ccw_arc(point: float, start: float, end: float) -> bool:
    return (point - start) % 3.0 < (end - start) % 3.0


def intersection_number(t: Triangulation, a: ArcPath, b: ArcPath, orientation: int = 1) -> int:
    """Algebraic intersection number of two closed normal curves on one link.

    Crossing points of ``a`` are placed before those of ``b`` along each glued
    side, so shared segments become parallel chords and only chords inside a
    common triangle can cross.
    """
    if a.vertex_class != b.vertex_class:
        raise NotSameLink(vertex_classes=(a.vertex_class, b.vertex_class))
    validate_path(t, a)
    validate_path(t, b)

    crossings = {'a': _crossings(t, a), 'b': _crossings(t, b)}
    by_owner: Dict[Tuple[int, int, int], List[Tuple[str, int]]] = {}
    for name in ('a', 'b'):
        for k, (exit_side, entry_side) in enumerate(crossings[name]):
            by_owner.setdefault(min(exit_side, entry_side), []).append((name, k))

    # Position of each crossing along its side, measured anticlockwise in both triangles.
    position: Dict[Tuple[str, int, str], float] = {}
    for owner, points in by_owner.items():
        points.sort(key=lambda p: (p[0], p[1]))
        for rank, (name, k) in enumerate(points):
            tau = (rank + 1) / (len(points) + 1)
            exit_side, entry_side = crossings[name][k]
            position[(name, k, 'exit')] = tau if exit_side == owner else 1.0 - tau
            position[(name, k, 'entry')] = tau if entry_side == owner else 1.0 - tau

    def chords(name: str, path: ArcPath):
        result = {}
        n = len(path.steps)
        for k, step in enumerate(path.steps):
            sides = _triangle_sides(step.vertex, orientation)
            start = sides[step.entering_face] + position[(name, (k - 1) % n, 'entry')]
            end = sides[step.exiting_face] + position[(name, k, 'exit')]
            result.setdefault((step.tet, step.vertex), []).append((start, end))
        return result

    chords_a = chords('a', a)
    chords_b = chords('b', b)
    total = 0
    for triangle, segments in chords_a.items():
        for a1, a2 in segments:
            for b1, b2 in chords_b.get(triangle, ()):
                first = _in_ccw_arc(b1, a1, a2)
                second = _in_ccw_arc(b2, a1, a2)
                if first and not second:
                    total += 1
                elif second and not first:
                    total -= 1
    return total
