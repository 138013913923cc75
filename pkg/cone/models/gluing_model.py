from dataclasses import dataclass
from typing import Tuple

import numpy as np

from cone.models.triangulation_model import EdgeClass


@dataclass(frozen=True, eq=False)
class QuadIncidence:
    """Integer matrix i(q, e): rows are flat quads 3 * tet + slot, columns edge classes."""
    matrix: np.ndarray
    edges: Tuple[EdgeClass, ...]

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=np.int64)
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @property
    def quad_count(self) -> int:
        return self.matrix.shape[0]

    @property
    def tet_count(self) -> int:
        return self.matrix.shape[0] // 3

    @property
    def edge_count(self) -> int:
        return self.matrix.shape[1]

    def column(self, edge: int) -> np.ndarray:
        return self.matrix[:, edge]


@dataclass(frozen=True)
class VertexCurvatureCheck:
    """Combinatorial Gauss-Bonnet record for one vertex class."""
    vertex_class: int
    angle_sum_defect: float
    expected: float
    ok: bool

    def to_dict(self) -> dict:
        return {
            'vertex_class': self.vertex_class,
            'angle_sum_defect': self.angle_sum_defect,
            'expected': self.expected,
            'ok': self.ok,
        }
