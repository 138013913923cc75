"""
Angle chart and volume.

Angle points are real arrays over flat quads (3 * tet + slot), the same
indexing as angle-structure vectors, so TAS directions act on them directly.
"""
import logging
import math

import mpmath
import numpy as np
from scipy import integrate

from cone.constants import QUADS_PER_TETRAHEDRON
from cone.models.shape_model import QuadConvention, ShapeAssignment
from cone.services.gluing_services import require_positive

logger = logging.getLogger(__name__)


def angle_sums(x: np.ndarray) -> np.ndarray:
    return np.asarray(x, dtype=float).reshape(-1, QUADS_PER_TETRAHEDRON).sum(axis=1)


def is_angle_point(x: np.ndarray, tol: float = 1e-12) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(x > 0) and np.all(x < math.pi) and np.allclose(angle_sums(x), math.pi, atol=tol))


def shapes_from_angles(x: np.ndarray, convention: QuadConvention) -> ShapeAssignment:
    """z(q) = sin x(q') / sin x(q'') * exp(i x(q)) at the preferred quad of every tetrahedron."""
    x = np.asarray(x, dtype=float).reshape(-1)
    levels = x[convention.level_index()]
    z = np.sin(levels[:, 1]) / np.sin(levels[:, 2]) * np.exp(1j * levels[:, 0])
    return ShapeAssignment(z, convention)


def angles_from_shapes(z: ShapeAssignment) -> np.ndarray:
    """x(q) = arg z(q) in (0, pi)."""
    return np.angle(require_positive(z))


def lobachevsky(theta):
    """Lobachevsky function via the Clausen function: Λ(θ) = Cl2(2θ) / 2."""
    if np.ndim(theta) == 0:
        return 0.5 * float(mpmath.clsin(2, 2.0 * float(theta)))
    return np.array([lobachevsky(value) for value in np.asarray(theta, dtype=float).reshape(-1)]).reshape(np.shape(theta))


def lobachevsky_quadrature(theta: float) -> float:
    """Λ(θ) = -∫_0^θ log|2 sin u| du by adaptive quadrature.

    Reduced to [0, π/2] by oddness and π-periodicity; the log singularity at
    0 is integrated in closed form.
    """
    r = math.fmod(float(theta), math.pi)
    if r < 0:
        r += math.pi
    if r > math.pi / 2:
        return -lobachevsky_quadrature(math.pi - r)
    if r == 0.0:
        return 0.0
    smooth, _ = integrate.quad(lambda u: math.log(np.sinc(u / math.pi)), 0.0, r,
                               epsabs=1e-15, epsrel=1e-13, limit=200)
    return -(r * math.log(2.0) + r * math.log(r) - r + smooth)


def volume(x: np.ndarray) -> float:
    """F(x) = sum_q Λ(x(q))."""
    return float(np.sum(lobachevsky(np.asarray(x, dtype=float))))


def volume_of_shapes(z: ShapeAssignment) -> float:
    return volume(angles_from_shapes(z))


def volume_gradient(x: np.ndarray) -> np.ndarray:
    return -np.log(np.abs(2.0 * np.sin(np.asarray(x, dtype=float))))


def hessian_volume(x: np.ndarray) -> np.ndarray:
    """Diagonal Hessian of F: entries -cot x(q)."""
    x = np.asarray(x, dtype=float)
    return np.diag(-np.cos(x) / np.sin(x))


def hessian_quadratic_form(x: np.ndarray, w: np.ndarray) -> float:
    w = np.asarray(w, dtype=float)
    return float(w @ hessian_volume(x) @ w)
