"""
Random instances for the universal checks: oriented closed face-pairing
tables, positively oriented shapes, angle points and closed normal curves.
"""
import itertools
import logging
import math
from typing import List, Optional

import numpy as np

from cone.constants import FACE_VERTICES, face_opposite, permutation_parity, vertex_opposite
from cone.models.curve_model import ArcPath, Step
from cone.models.shape_model import QuadConvention, ShapeAssignment
from cone.models.triangulation_model import FacePairing, Triangulation
from cone.services.geometry_services import shapes_from_angles
from cone.services.triangulation_services import (
    build_triangulation,
    corner_class_index,
    find_invalid_edge,
    is_connected,
    vertex_classes,
)

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 10_000


def _odd_extensions(source_face: int, target_face: int) -> List[tuple]:
    """Orientation-reversing extended permutations carrying one face onto another."""
    perms = []
    for images in itertools.permutations(FACE_VERTICES[target_face]):
        perm = [0, 0, 0, 0]
        for src, dst in zip(FACE_VERTICES[source_face], images):
            perm[src] = dst
        perm[vertex_opposite(source_face)] = vertex_opposite(target_face)
        if permutation_parity(perm) == 1:
            perms.append(tuple(perm))
    return perms


def _random_pairings(tet_count: int, rng: np.random.Generator):
    faces = [(tet, face) for tet in range(tet_count) for face in range(4)]
    order = rng.permutation(len(faces))
    pairings = [[None] * 4 for _ in range(tet_count)]
    for k in range(0, len(order), 2):
        (tet_a, face_a), (tet_b, face_b) = faces[order[k]], faces[order[k + 1]]
        choices = _odd_extensions(face_a, face_b)
        perm = choices[rng.integers(len(choices))]
        forward = FacePairing(target_tet=tet_b, target_face=face_b, perm=perm)
        pairings[tet_a][face_a] = forward
        pairings[tet_b][face_b] = FacePairing(target_tet=tet_a, target_face=face_a, perm=forward.inverse_perm())
    return pairings


def random_triangulation(tet_count: int, rng: np.random.Generator) -> Triangulation:
    """Connected oriented closed pseudo-manifold with no edge glued to its reverse."""
    for attempt in range(1, MAX_ATTEMPTS + 1):
        pairings = _random_pairings(tet_count, rng)
        if find_invalid_edge(pairings) is not None:
            continue
        t = build_triangulation(pairings)
        if not is_connected(t):
            continue
        logger.debug(f"Random triangulation with {tet_count} tetrahedra after {attempt} attempt(s)")
        return t
    raise RuntimeError(f"No valid triangulation with {tet_count} tetrahedra after {MAX_ATTEMPTS} attempts")


def random_angle_point(tet_count: int, rng: np.random.Generator, concentration: float = 4.0) -> np.ndarray:
    """Angles over flat quads, Dirichlet-distributed within each tetrahedron."""
    return (rng.dirichlet([concentration] * 3, size=tet_count) * math.pi).reshape(-1)


def random_shapes(convention: QuadConvention, rng: np.random.Generator) -> ShapeAssignment:
    return shapes_from_angles(random_angle_point(convention.tet_count, rng), convention)


def perturb_shapes(z: ShapeAssignment, radius: float, rng: np.random.Generator) -> ShapeAssignment:
    """Uniform noise in the disc of ``radius`` around every preferred parameter."""
    n = z.tet_count
    r = radius * np.sqrt(rng.uniform(size=n))
    phase = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return z.with_values(z.preferred_values + r * np.exp(1j * phase))


def random_closed_curve(t: Triangulation, rng: np.random.Generator,
                        vertex_class: Optional[int] = None) -> ArcPath:
    """Closed normal curve cut out of a random walk on (tet, vertex, entering face) states."""
    corners = corner_class_index(t)
    if vertex_class is None:
        vertex_class = int(rng.integers(len(vertex_classes(t))))
    members = [corner for corner, label in sorted(corners.items()) if label == vertex_class]
    tet, vertex = members[rng.integers(len(members))]
    faces = [f for f in range(4) if f != face_opposite(vertex)]
    state = (tet, vertex, faces[rng.integers(len(faces))])

    visited = {}
    steps = []
    while state not in visited:
        visited[state] = len(steps)
        tet, vertex, entering = state
        exits = [f for f in range(4) if f not in (face_opposite(vertex), entering)]
        exiting = exits[rng.integers(len(exits))]
        steps.append(Step(tet, vertex, entering, exiting))
        pairing = t.glue(tet, exiting)
        state = (pairing.target_tet, pairing.perm[vertex], pairing.target_face)

    cycle = steps[visited[state]:]
    return ArcPath(vertex_class=vertex_class, steps=tuple(cycle))
