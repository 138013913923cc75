from dataclasses import dataclass
from typing import Tuple

from sympy.polys.domains import QQ_I


@dataclass(frozen=True)
class RationalParam:
    """Rational functions of one complex variable with Gaussian-rational coefficients.

    Coefficients are stored in ascending degree as QQ_I elements.
    """
    name: str
    numerators: Tuple[tuple, ...]
    denominators: Tuple[tuple, ...]

    @property
    def component_count(self) -> int:
        return len(self.numerators)

    def conjugate(self) -> 'RationalParam':
        """Family with conjugated coefficients."""
        def conj(coefficients):
            return tuple(QQ_I(c.x, -c.y) for c in coefficients)
        return RationalParam(
            name=f"{self.name}'",
            numerators=tuple(conj(p) for p in self.numerators),
            denominators=tuple(conj(p) for p in self.denominators),
        )


@dataclass(frozen=True)
class RegionTopology:
    """Flood-fill summary of a boolean grid region."""
    cells: int
    components: int
    holes: int
    ignored_cells: int

    @property
    def connected(self) -> bool:
        return self.components == 1

    @property
    def simply_connected(self) -> bool:
        return self.connected and self.holes == 0

    def to_dict(self) -> dict:
        return {
            'cells': self.cells,
            'components': self.components,
            'holes': self.holes,
            'ignored_cells': self.ignored_cells,
            'connected': self.connected,
            'simply_connected': self.simply_connected,
        }
