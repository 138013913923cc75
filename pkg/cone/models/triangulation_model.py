from dataclasses import dataclass, field
from typing import Tuple

from cone.constants import FACE_VERTICES, vertex_opposite


@dataclass(frozen=True)
class FacePairing:
    """Gluing of one face onto a face of another (or the same) tetrahedron.

    ``perm`` is the extension of the face bijection to all four vertex
    labels: the off-face vertex goes to the off-face vertex of the target.
    """
    target_tet: int
    target_face: int
    perm: Tuple[int, int, int, int]

    @property
    def digits(self) -> str:
        """Images of the source face's vertices in increasing order."""
        return ''.join(str(self.perm[v]) for v in FACE_VERTICES[self.source_face])

    @property
    def source_face(self) -> int:
        off_face = self.perm.index(vertex_opposite(self.target_face))
        return 3 - off_face

    def inverse_perm(self) -> Tuple[int, int, int, int]:
        inverse = [0, 0, 0, 0]
        for src, dst in enumerate(self.perm):
            inverse[dst] = src
        return tuple(inverse)


@dataclass(frozen=True)
class Triangulation:
    """Closed oriented pseudo-manifold given by face pairings of oriented tetrahedra."""
    tet_count: int
    pairings: Tuple[Tuple[FacePairing, FacePairing, FacePairing, FacePairing], ...]

    def glue(self, tet: int, face: int) -> FacePairing:
        return self.pairings[tet][face]


@dataclass(frozen=True)
class EdgeClass:
    """Orbit of oriented tetrahedron edges; each member is (tet, (tail, head))."""
    index: int
    members: Tuple[Tuple[int, Tuple[int, int]], ...]
    endpoints: Tuple[int, int]

    @property
    def valence(self) -> int:
        return len(self.members)

    @property
    def representative(self) -> Tuple[int, Tuple[int, int]]:
        return self.members[0]


@dataclass(frozen=True)
class LinkSurface:
    """Triangulated boundary surface around one vertex class.

    Triangles are the corners (tet, vertex); ``side_gluings`` maps each
    triangle side, keyed (tet, vertex, face), to the side it is glued to.
    """
    triangles: Tuple[Tuple[int, int], ...]
    side_gluings: Tuple[Tuple[Tuple[int, int, int], Tuple[int, int, int]], ...]
    vertex_count: int
    euler_characteristic: int

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2


@dataclass(frozen=True)
class VertexClass:
    index: int
    members: Tuple[Tuple[int, int], ...]
    link: LinkSurface

    @property
    def genus(self) -> int:
        return self.link.genus


@dataclass(frozen=True)
class CensusSummary:
    tet_count: int
    edge_count: int
    vertex_count: int
    genera: Tuple[int, ...]
    lemma_ok: bool
    edge_valences: Tuple[int, ...] = field(default=())

    @property
    def genus_sum(self) -> int:
        return sum(self.genera)

    def to_dict(self) -> dict:
        return {
            'tet_count': self.tet_count,
            'edge_count': self.edge_count,
            'vertex_count': self.vertex_count,
            'genera': list(self.genera),
            'genus_sum': self.genus_sum,
            'edge_valences': list(self.edge_valences),
            'lemma_ok': self.lemma_ok,
        }
