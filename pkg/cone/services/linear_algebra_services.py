"""
Exact and floating-point rank, kernel and lattice computations.

Integer and rational matrices go through sympy's DomainMatrix, which
eliminates fraction-free over ZZ; complex Jacobians use singular values.
"""
import math
from fractions import Fraction
from typing import Iterable, List, Sequence

import numpy as np
from django.conf import settings
from sympy import Matrix, QQ, ZZ
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.matrices import DomainMatrix

# Singular values below this many ulps of the term scale, per dimension, are rounding.
ROUNDING_FACTOR = 64


def _is_rational(rows) -> bool:
    return any(isinstance(x, Fraction) for row in rows for x in row)


def to_domain_matrix(rows: Sequence[Sequence], ncols: int = None) -> DomainMatrix:
    """Integer (or Fraction) rows as a DomainMatrix over ZZ (or QQ)."""
    rows = [list(row) for row in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if _is_rational(rows):
        data = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows]
        return DomainMatrix(data, (len(rows), ncols), QQ)
    data = [[ZZ(int(x)) for x in row] for row in rows]
    return DomainMatrix(data, (len(rows), ncols), ZZ)


def rank_exact(rows) -> int:
    """Rank over the rationals by fraction-free Gauss-Jordan elimination."""
    rows = [list(row) for row in rows]
    if not rows or not rows[0]:
        return 0
    _, _, pivots = to_domain_matrix(rows).rref_den(method='FF')
    return len(pivots)


def integer_nullspace(rows, ncols: int) -> List[np.ndarray]:
    """Integer basis of the rational kernel of an integer matrix."""
    rows = [list(row) for row in rows]
    if not rows:
        return [np.eye(ncols, dtype=np.int64)[i] for i in range(ncols)]
    kernel = to_domain_matrix(rows, ncols).convert_to(QQ).nullspace()
    basis = []
    for vector in kernel.to_list():
        entries = [Fraction(int(x.numerator), int(x.denominator)) for x in vector]
        basis.append(clear_denominators(entries))
    return basis


def clear_denominators(entries: Iterable[Fraction]) -> np.ndarray:
    """Smallest primitive integer vector on the same ray."""
    entries = [Fraction(x) for x in entries]
    lcm = 1
    for x in entries:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in entries]
    divisor = 0
    for x in ints:
        divisor = math.gcd(divisor, abs(x))
    if divisor > 1:
        ints = [x // divisor for x in ints]
    return np.asarray(ints, dtype=np.int64)


def span_dimension(vectors) -> int:
    vectors = [list(v) for v in vectors]
    return rank_exact(vectors) if vectors else 0


def span_contains(basis, vectors) -> bool:
    """Whether every vector lies in the rational span of ``basis``."""
    basis = [list(v) for v in basis]
    vectors = [list(v) for v in vectors]
    if not vectors:
        return True
    return span_dimension(basis + vectors) == span_dimension(basis)


def spans_equal(first, second) -> bool:
    return span_contains(first, second) and span_contains(second, first)


def intersection_dimension(first, second) -> int:
    """dim(span A ∩ span B) = dim A + dim B - dim(A + B)."""
    first = [list(v) for v in first]
    second = [list(v) for v in second]
    return span_dimension(first) + span_dimension(second) - span_dimension(first + second)


def _invariant_factor_product(m: Matrix) -> int:
    smith = smith_normal_form(m, domain=ZZ)
    product = 1
    for i in range(min(smith.rows, smith.cols)):
        if smith[i, i] != 0:
            product *= abs(int(smith[i, i]))
    return product


def lattice_contains(columns: np.ndarray, vector) -> bool:
    """Whether ``vector`` is an integer combination of the columns of ``columns``.

    L(M) sits inside L(M | d); when both have the same rank the index is the
    ratio of their products of invariant factors, so d lies in L(M) iff the
    products agree.
    """
    columns = np.asarray(columns, dtype=np.int64)
    d = [int(x) for x in vector]
    if columns.size == 0 or not np.any(columns):
        return not any(d)
    m = Matrix(columns.tolist())
    extended = m.row_join(Matrix(d))
    if rank_exact(extended.tolist()) != rank_exact(m.tolist()):
        return False
    return _invariant_factor_product(m) == _invariant_factor_product(extended)


def rank_numeric(matrix, tol: float = None, scale: float = None) -> int:
    """Number of singular values above the larger of ``tol`` times the largest
    one and a rounding floor.

    ``scale`` is the magnitude of the terms summed into the entries; when the
    entries cancel analytically they are rounding noise of that size, so the
    floor must come from the terms and not from the entries. It defaults to
    the largest entry.
    """
    tol = settings.CONE_RANK_TOLERANCE if tol is None else tol
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0
    singular_values = np.linalg.svd(matrix, compute_uv=False)
    if scale is None:
        scale = float(np.max(np.abs(matrix)))
    floor = ROUNDING_FACTOR * np.finfo(float).eps * max(matrix.shape) * scale
    threshold = max(tol * singular_values[0], floor)
    return int(np.sum(singular_values > threshold))
