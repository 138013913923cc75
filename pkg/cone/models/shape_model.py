from dataclasses import dataclass
from typing import Tuple

import numpy as np

from cone.constants import LEVEL_MARKS, QUADS_PER_TETRAHEDRON


@dataclass(frozen=True)
class QuadConvention:
    """Which quad carries z in each tetrahedron, and the cyclic order q -> q'.

    ``preferred[tet]`` is the slot of the shape z of that tetrahedron.
    With ``orientation`` +1 the successor of slot s is s + 1 (mod 3), so
    z sits at edge 01, z' at 02 and z'' at 03; with -1 the cycle runs
    backwards. The orientation also fixes the anticlockwise direction in
    the vertex links.
    """
    preferred: Tuple[int, ...]
    orientation: int = 1

    @classmethod
    def default(cls, tet_count: int) -> 'QuadConvention':
        return cls(preferred=(0,) * tet_count, orientation=1)

    @property
    def tet_count(self) -> int:
        return len(self.preferred)

    def successor(self, slot: int) -> int:
        step = 1 if self.orientation == 1 else 2
        return (slot + step) % QUADS_PER_TETRAHEDRON

    def level_slots(self, tet: int) -> Tuple[int, int, int]:
        """Slots of z, z' and z'' of one tetrahedron."""
        first = self.preferred[tet]
        second = self.successor(first)
        return first, second, self.successor(second)

    def level_of(self, tet: int, slot: int) -> int:
        return self.level_slots(tet).index(slot)

    def successor_index(self) -> np.ndarray:
        """Flat quad index of q' for every flat quad index q."""
        n = self.tet_count
        index = np.empty(QUADS_PER_TETRAHEDRON * n, dtype=int)
        for tet in range(n):
            for slot in range(QUADS_PER_TETRAHEDRON):
                index[QUADS_PER_TETRAHEDRON * tet + slot] = QUADS_PER_TETRAHEDRON * tet + self.successor(slot)
        return index

    def level_index(self) -> np.ndarray:
        """Array (tet, level) -> flat quad index."""
        n = self.tet_count
        index = np.empty((n, QUADS_PER_TETRAHEDRON), dtype=int)
        for tet in range(n):
            for level, slot in enumerate(self.level_slots(tet)):
                index[tet, level] = QUADS_PER_TETRAHEDRON * tet + slot
        return index

    def quad_name(self, tet: int, slot: int) -> str:
        return f'z{tet}{LEVEL_MARKS[self.level_of(tet, slot)]}'

    def to_dict(self) -> dict:
        return {'preferred': list(self.preferred), 'orientation': self.orientation}


@dataclass(frozen=True, eq=False)
class ShapeAssignment:
    """Shape parameters determined by the preferred-quad values z_tet."""
    preferred_values: np.ndarray
    convention: QuadConvention

    def __post_init__(self):
        values = np.asarray(self.preferred_values, dtype=complex).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, 'preferred_values', values)

    @property
    def tet_count(self) -> int:
        return self.preferred_values.shape[0]

    def level_values(self) -> np.ndarray:
        """Array (tet, level) of z, z' = 1/(1 - z) and z'' = 1 - 1/z."""
        z = self.preferred_values
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.stack([z, 1.0 / (1.0 - z), 1.0 - 1.0 / z], axis=1)

    def quad_values(self) -> np.ndarray:
        """Flat array over quads, indexed 3 * tet + slot."""
        values = np.empty(QUADS_PER_TETRAHEDRON * self.tet_count, dtype=complex)
        values[self.convention.level_index().reshape(-1)] = self.level_values().reshape(-1)
        return values

    def with_values(self, preferred_values) -> 'ShapeAssignment':
        return ShapeAssignment(np.asarray(preferred_values, dtype=complex), self.convention)
