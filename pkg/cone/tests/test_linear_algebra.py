from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from cone.services.linear_algebra_services import (
    clear_denominators,
    integer_nullspace,
    intersection_dimension,
    lattice_contains,
    rank_exact,
    rank_numeric,
    span_contains,
    span_dimension,
    spans_equal,
)


class ExactRankTest(SimpleTestCase):

    def test_integer_rank(self):
        self.assertEqual(rank_exact([[1, 2, 3], [2, 4, 6], [1, 0, 1]]), 2)
        self.assertEqual(rank_exact([[0, 0], [0, 0]]), 0)
        self.assertEqual(rank_exact([]), 0)

    def test_fraction_rows(self):
        self.assertEqual(rank_exact([[Fraction(1, 2), 1], [1, 2]]), 1)
        self.assertEqual(rank_exact([[Fraction(1, 3), 1], [1, 2]]), 2)

    def test_nullspace_is_primitive_integer(self):
        rows = [[1, 1, 1, 0], [0, 2, 0, 1]]
        basis = integer_nullspace(rows, 4)
        self.assertEqual(len(basis), 2)
        for v in basis:
            self.assertEqual(v.dtype, np.int64)
            np.testing.assert_array_equal(np.asarray(rows) @ v, 0)
            self.assertEqual(np.gcd.reduce(np.abs(v)), 1)

    def test_nullspace_without_constraints(self):
        basis = integer_nullspace([], 3)
        self.assertEqual(span_dimension(basis), 3)

    def test_clear_denominators(self):
        np.testing.assert_array_equal(clear_denominators([Fraction(1, 2), Fraction(-1, 3), 0]), [3, -2, 0])
        np.testing.assert_array_equal(clear_denominators([4, 6]), [2, 3])


class SpanTest(SimpleTestCase):

    def test_containment_and_equality(self):
        a = [[1, 0, 0], [0, 1, 0]]
        b = [[1, 1, 0], [1, -1, 0]]
        self.assertTrue(span_contains(a, [[2, 3, 0]]))
        self.assertFalse(span_contains(a, [[0, 0, 1]]))
        self.assertTrue(span_contains(a, []))
        self.assertTrue(spans_equal(a, b))

    def test_intersection_dimension(self):
        self.assertEqual(intersection_dimension([[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]]), 1)
        self.assertEqual(intersection_dimension([[1, 0, 0]], [[0, 0, 1]]), 0)


class LatticeTest(SimpleTestCase):

    def test_rational_but_not_integral(self):
        columns = np.array([[2, 0], [0, 1], [0, 0]])
        self.assertTrue(lattice_contains(columns, [4, -3, 0]))
        self.assertFalse(lattice_contains(columns, [1, 0, 0]))
        self.assertFalse(lattice_contains(columns, [0, 0, 1]))

    def test_dependent_columns(self):
        columns = np.array([[2, 3], [0, 0]])
        self.assertTrue(lattice_contains(columns, [1, 0]))
        self.assertTrue(lattice_contains(columns, [-5, 0]))

    def test_zero_lattice(self):
        zero = np.zeros((3, 2), dtype=np.int64)
        self.assertTrue(lattice_contains(zero, [0, 0, 0]))
        self.assertFalse(lattice_contains(zero, [0, 1, 0]))


class NumericRankTest(SimpleTestCase):

    def test_relative_threshold(self):
        m = np.diag([1.0, 1e-3, 1e-12])
        self.assertEqual(rank_numeric(m), 2)
        self.assertEqual(rank_numeric(m, tol=1e-2), 1)
        self.assertEqual(rank_numeric(m * 1e6), 2)

    def test_degenerate_inputs(self):
        self.assertEqual(rank_numeric(np.zeros((2, 3))), 0)
        self.assertEqual(rank_numeric(np.zeros((0, 3))), 0)

    def test_complex_matrix(self):
        m = np.array([[1 + 1j, 2j], [1 - 1j, 2]])
        self.assertEqual(rank_numeric(m), 1)

    def test_rounding_floor_uses_term_scale(self):
        # Entries that cancel analytically are rounding noise of the summed terms' size.
        noise = np.array([[5e-16, -3e-16, 2e-16]])
        self.assertEqual(rank_numeric(noise), 1)
        self.assertEqual(rank_numeric(noise, scale=1.0), 0)
        self.assertEqual(rank_numeric(np.array([[1e-6, 0.0, 0.0]]), scale=1.0), 1)
