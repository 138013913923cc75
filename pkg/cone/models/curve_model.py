from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from cone.constants import vertex_opposite


@dataclass(frozen=True)
class Step:
    """One oriented normal arc in the link triangle at (tet, vertex)."""
    tet: int
    vertex: int
    entering_face: int
    exiting_face: int

    @property
    def entering_corner(self) -> int:
        """Vertex opposite the entering face."""
        return vertex_opposite(self.entering_face)

    @property
    def exiting_corner(self) -> int:
        return vertex_opposite(self.exiting_face)

    @property
    def isolated_corner(self) -> int:
        """Corner cut off by the arc: the vertex shared by both crossed sides."""
        used = {self.vertex, self.entering_corner, self.exiting_corner}
        return ({0, 1, 2, 3} - used).pop()

    def reversed(self) -> 'Step':
        return Step(self.tet, self.vertex, self.exiting_face, self.entering_face)

    def as_list(self) -> list:
        return [self.tet, self.vertex, self.entering_face, self.exiting_face]


@dataclass(frozen=True)
class ArcPath:
    """Closed normal curve on the link of one vertex class, as a cyclic list of arcs."""
    vertex_class: int
    steps: Tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def reversed(self) -> 'ArcPath':
        return ArcPath(self.vertex_class, tuple(step.reversed() for step in reversed(self.steps)))


@dataclass(frozen=True, eq=False)
class CurveSpec:
    """Named peripheral curve; the index vector is indexed by flat quad 3 * tet + slot.

    ``dual`` names the longitude a meridian meets once.
    """
    name: str
    index_vector: np.ndarray
    role: str = 'longitude'
    path: Optional[ArcPath] = None
    vertex_class: Optional[int] = None
    dual: Optional[str] = None

    def __post_init__(self):
        vector = np.asarray(self.index_vector, dtype=np.int64).reshape(-1)
        vector.setflags(write=False)
        object.__setattr__(self, 'index_vector', vector)
