from dataclasses import dataclass, field
from typing import List

import numpy as np

from cone.models.shape_model import ShapeAssignment


@dataclass(frozen=True, eq=False)
class SolveTarget:
    """Prescribed log-curvature u per edge class and log holonomy t per longitude."""
    u: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'u', np.asarray(self.u, dtype=complex).reshape(-1))
        object.__setattr__(self, 't', np.asarray(self.t, dtype=complex).reshape(-1))

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.u, self.t])


@dataclass(eq=False)
class SolveResult:
    z: ShapeAssignment
    residual_norm: float
    iterations: int
    converged: bool
    residual_history: List[float] = field(default_factory=list)
    step_history: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'z': [[float(v.real), float(v.imag)] for v in self.z.preferred_values],
            'residual_norm': self.residual_norm,
            'iterations': self.iterations,
            'converged': self.converged,
            'residual_history': list(self.residual_history),
            'step_history': list(self.step_history),
        }


@dataclass(frozen=True)
class PositivityReport:
    positive: bool
    margins: tuple
    min_margin: float

    def to_dict(self) -> dict:
        return {'positive': self.positive, 'min_margin': self.min_margin, 'margins': list(self.margins)}
