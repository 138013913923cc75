from dataclasses import dataclass, field
from typing import Dict


@dataclass(frozen=True)
class SpanReport:
    """Exact dimension of a span of angle vectors and its relation to named subspaces."""
    dimension: int
    vector_count: int
    contained_in: Dict[str, bool] = field(default_factory=dict)
    trivial_intersection: Dict[str, bool] = field(default_factory=dict)
    equals: Dict[str, bool] = field(default_factory=dict)

    @property
    def independent(self) -> bool:
        return self.dimension == self.vector_count

    def to_dict(self) -> dict:
        return {
            'dimension': self.dimension,
            'vector_count': self.vector_count,
            'independent': self.independent,
            'contained_in': dict(self.contained_in),
            'trivial_intersection': dict(self.trivial_intersection),
            'equals': dict(self.equals),
        }
