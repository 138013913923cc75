"""
Rational parametrizations of a deformation-variety component.

Exact evaluation runs in the Gaussian rationals QQ_I; numeric evaluation
uses numpy polynomials. The positivity region is sampled on a grid and its
topology read off by flood fill.
"""
import logging
import math
import re
from typing import Dict, List, Sequence

import networkx as nx
import numpy as np
from django.conf import settings
from numpy.polynomial import polynomial as P
from sympy import sympify
from sympy.polys.domains import QQ_I

from cone.exceptions import PoleError
from cone.models.gluing_model import QuadIncidence
from cone.models.parametrization_model import RationalParam, RegionTopology
from cone.models.shape_model import QuadConvention, ShapeAssignment
from cone.services.gluing_services import complex_curvature, log_curvature
from cone.services.solver_services import positivity_check

logger = logging.getLogger(__name__)

POLE_TOLERANCE = 1e-14

IMAGINARY_COEFFICIENT = re.compile(r'([0-9)])i')


def parse_gaussian(text: str):
    """'1-2i', '-i', '3/5' -> QQ_I element."""
    cleaned = IMAGINARY_COEFFICIENT.sub(r'\1*I', str(text).replace(' ', '')).replace('i', 'I')
    return QQ_I.from_sympy(sympify(cleaned))


def rational_param_from_dict(data: dict) -> RationalParam:
    return RationalParam(
        name=data.get('name', 'phi0'),
        numerators=tuple(tuple(parse_gaussian(c) for c in p) for p in data['numerators']),
        denominators=tuple(tuple(parse_gaussian(c) for c in p) for p in data['denominators']),
    )


def _to_complex(c) -> complex:
    return complex(QQ_I.to_sympy(c))


def _numeric_coefficients(polys) -> List[np.ndarray]:
    return [np.array([_to_complex(c) for c in p], dtype=complex) for p in polys]


def _horner_exact(coefficients, point):
    value = QQ_I.zero
    for c in reversed(coefficients):
        value = value * point + c
    return value


def eval_exact(param: RationalParam, point) -> list:
    """Component values at a Gaussian-rational point, exactly."""
    point = parse_gaussian(point) if isinstance(point, str) else point
    values = []
    for j, (num, den) in enumerate(zip(param.numerators, param.denominators)):
        denominator = _horner_exact(den, point)
        if denominator == QQ_I.zero:
            raise PoleError(f"Component {j + 1} of {param.name} has a pole at {QQ_I.to_sympy(point)}",
                            point=complex(_to_complex(point)), component=j)
        values.append(QQ_I.quo(_horner_exact(num, point), denominator))
    return values


def eval_numeric(param: RationalParam, u: complex) -> np.ndarray:
    """Component values at a complex point."""
    u = complex(u)
    numerators = _numeric_coefficients(param.numerators)
    denominators = _numeric_coefficients(param.denominators)
    values = np.empty(param.component_count, dtype=complex)
    for j, (num, den) in enumerate(zip(numerators, denominators)):
        denominator = P.polyval(u, den)
        if abs(denominator) <= POLE_TOLERANCE * max(1.0, np.max(np.abs(den))):
            raise PoleError(f"Component {j + 1} of {param.name} has a pole at {u}", point=u, component=j)
        values[j] = P.polyval(u, num) / denominator
    return values


def eval_phi0(param: RationalParam, u: complex, conjugate: bool = False) -> np.ndarray:
    return eval_numeric(param.conjugate() if conjugate else param, u)


def poles(param: RationalParam, decimals: int = 10) -> List[complex]:
    """Distinct roots of the denominators, sorted by real then imaginary part."""
    found: Dict[tuple, complex] = {}
    for den in _numeric_coefficients(param.denominators):
        trimmed = np.trim_zeros(den, 'b')
        if trimmed.size <= 1:
            continue
        for root in P.polyroots(trimmed):
            key = (round(root.real, decimals) + 0.0, round(root.imag, decimals) + 0.0)
            found.setdefault(key, complex(*key))
    return [found[key] for key in sorted(found)]


def shapes_at(param: RationalParam, u: complex, convention: QuadConvention) -> ShapeAssignment:
    return ShapeAssignment(eval_numeric(param, u), convention)


def grid_points(step: float = None, box: Sequence[float] = None):
    """Cell centres of the sampling grid as (real axis, imaginary axis) arrays."""
    step = settings.CONE_PHI0_GRID_STEP if step is None else step
    x_min, x_max, y_min, y_max = settings.CONE_PHI0_GRID_BOX if box is None else box
    xs = x_min + step * (np.arange(int(round((x_max - x_min) / step))) + 0.5)
    ys = y_min + step * (np.arange(int(round((y_max - y_min) / step))) + 0.5)
    return xs, ys


def positivity_grid(param: RationalParam, step: float = None,
                    box: Sequence[float] = None) -> np.ndarray:
    """Boolean mask [row = imaginary index, column = real index] of positively oriented samples.

    Im z > 0 forces Im 1/(1 - z) > 0 and Im (1 - 1/z) > 0, so one sign test
    per component decides positivity; poles count as outside.
    """
    xs, ys = grid_points(step, box)
    grid = xs[np.newaxis, :] + 1j * ys[:, np.newaxis]
    mask = np.ones(grid.shape, dtype=bool)
    numerators = _numeric_coefficients(param.numerators)
    denominators = _numeric_coefficients(param.denominators)
    for num, den in zip(numerators, denominators):
        denominator = P.polyval(grid, den)
        finite = np.abs(denominator) > POLE_TOLERANCE * max(1.0, np.max(np.abs(den)))
        values = P.polyval(grid, num) / np.where(finite, denominator, 1.0)
        mask &= finite & (values.imag > 0)
    logger.debug(f"Positivity grid for {param.name}: {int(mask.sum())} of {mask.size} cells")
    return mask


def _components(mask: np.ndarray, value: bool, diagonal: bool) -> List[set]:
    rows, cols = mask.shape
    graph = nx.Graph()
    offsets = [(0, 1), (1, 0)] + ([(1, 1), (1, -1)] if diagonal else [])
    for r in range(rows):
        for c in range(cols):
            if mask[r, c] != value:
                continue
            graph.add_node((r, c))
            for dr, dc in offsets:
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols and mask[rr, cc] == value:
                    graph.add_edge((r, c), (rr, cc))
    return [set(component) for component in nx.connected_components(graph)]


def region_topology(mask: np.ndarray, min_cells: int = None) -> RegionTopology:
    """Components of the region (8-connected) and holes of its complement (4-connected).

    Components and holes with fewer than ``min_cells`` cells are grid
    artefacts and are ignored. A hole is a complement component that does not
    reach the border of the grid.
    """
    min_cells = settings.CONE_PHI0_MIN_COMPONENT_CELLS if min_cells is None else min_cells
    rows, cols = mask.shape
    region = [c for c in _components(mask, True, diagonal=True)]
    kept = [c for c in region if len(c) >= min_cells]
    ignored = sum(len(c) for c in region if len(c) < min_cells)

    holes = 0
    for component in _components(mask, False, diagonal=False):
        touches_border = any(r in (0, rows - 1) or c in (0, cols - 1) for r, c in component)
        if not touches_border and len(component) >= min_cells:
            holes += 1
    return RegionTopology(cells=int(mask.sum()), components=len(kept), holes=holes, ignored_cells=ignored)


def region_samples(mask: np.ndarray, count: int, rng: np.random.Generator, step: float = None,
                   box: Sequence[float] = None) -> List[complex]:
    """Up to ``count`` grid points drawn from the positive cells."""
    xs, ys = grid_points(step, box)
    cells = np.argwhere(mask)
    if cells.size == 0:
        return []
    chosen = rng.choice(len(cells), size=min(count, len(cells)), replace=False)
    return [complex(xs[cells[k][1]], ys[cells[k][0]]) for k in sorted(chosen)]


def verify_on_variety(param: RationalParam, inc: QuadIncidence, convention: QuadConvention,
                      samples: Sequence[complex], c_tol: float = 1e-10, g_tol: float = 1e-9) -> List[dict]:
    """At each positively oriented sample: c = 1 and G = 2 pi i on every edge."""
    records = []
    for u in samples:
        record = {'u': [float(complex(u).real), float(complex(u).imag)]}
        try:
            z = shapes_at(param, u, convention)
        except PoleError as exc:
            record.update({'positive': False, 'error': exc.error_code})
            records.append(record)
            continue
        record['positive'] = positivity_check(z).positive
        if record['positive']:
            c_error = float(np.max(np.abs(complex_curvature(inc, z) - 1.0)))
            g_error = float(np.max(np.abs(log_curvature(inc, z) - 2j * math.pi)))
            record.update({'c_error': c_error, 'g_error': g_error,
                           'ok': c_error <= c_tol and g_error <= g_tol})
        records.append(record)
    failures = [r for r in records if r.get('positive') and not r.get('ok')]
    if failures:
        logger.warning(f"{len(failures)} of {len(records)} samples fail the gluing equations")
    return records
