import math

import numpy as np
from django.test import SimpleTestCase

from cone.accessors.fixture_accessors import load_curves, load_fixture, load_shapes
from cone.exceptions import DegenerateShape, NotPositivelyOriented
from cone.models.shape_model import QuadConvention, ShapeAssignment
from cone.services.gluing_services import (
    angle_sum_defect,
    complex_curvature,
    curvature_fiber_lifts,
    curvature_monomials,
    finite_difference_jacobian,
    gauss_bonnet_check,
    incidence_row_sums_ok,
    jacobian_G,
    log_curvature,
    monomial_of_vector,
    neumann_matrix,
    quad_incidence,
)
from cone.services.linear_algebra_services import rank_exact, rank_numeric
from cone.services.peripheral_services import boundary_map, jacobian_H
from cone.services.random_services import random_shapes

PI_I = math.pi * 1j


class Table2Mixin:

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.bundle = load_fixture('table2')
        cls.t = cls.bundle.triangulation
        cls.convention = cls.bundle.convention
        cls.inc = quad_incidence(cls.t)
        cls.curves = load_curves('default', cls.bundle)
        cls.longitudes = [c for c in cls.curves if c.role == 'longitude']
        cls.z0 = load_shapes('z0', cls.bundle)
        cls.z1 = load_shapes('z1', cls.bundle)


class IncidenceTest(Table2Mixin, SimpleTestCase):

    def test_row_sums(self):
        self.assertTrue(incidence_row_sums_ok(self.inc))
        self.assertTrue(incidence_row_sums_ok(quad_incidence(load_fixture('table1').triangulation)))

    def test_column_sums_are_valences(self):
        self.assertEqual(self.inc.matrix.sum(axis=0).tolist(), [5, 6, 18, 1])

    def test_neumann_rank(self):
        self.assertEqual(rank_exact(neumann_matrix(self.inc, self.convention).tolist()), 2)
        table1 = load_fixture('table1')
        inc1 = quad_incidence(table1.triangulation)
        self.assertEqual(rank_exact(neumann_matrix(inc1, table1.convention).tolist()), 6)

    def test_neumann_rank_independent_of_preferred_quads(self):
        for preferred in ((0,) * 5, (1, 2, 0, 1, 2)):
            convention = QuadConvention(preferred=preferred, orientation=-1)
            self.assertEqual(rank_exact(neumann_matrix(self.inc, convention).tolist()), 2)

    def test_curvature_monomials_in_relabelled_order(self):
        monomials = curvature_monomials(self.inc, self.convention, self.bundle.published_edge_order)
        self.assertEqual(monomials, self.bundle.metadata['curvature_monomials'])

    def test_holonomy_monomials(self):
        strings = [monomial_of_vector(c.index_vector, self.convention) for c in self.longitudes]
        self.assertEqual(strings, ["z0' z2''^-1", 'z3 z4^-1', "z0 z1'^-1 z2' z3' z4'"])


class PointEvaluationTest(Table2Mixin, SimpleTestCase):

    def test_log_curvature_at_z0(self):
        expected = np.array([5 / 3, 2, 6, 1 / 3]) * PI_I
        np.testing.assert_allclose(log_curvature(self.inc, self.z0), expected, atol=1e-10)

    def test_log_curvature_at_z1(self):
        expected = np.array([11 / 3, 2, 4, 1 / 3]) * PI_I
        np.testing.assert_allclose(log_curvature(self.inc, self.z1), expected, atol=1e-10)

    def test_same_curvature_different_log_curvature(self):
        np.testing.assert_allclose(complex_curvature(self.inc, self.z0), complex_curvature(self.inc, self.z1),
                                   atol=1e-10)
        self.assertGreater(np.max(np.abs(log_curvature(self.inc, self.z0) - log_curvature(self.inc, self.z1))), 1)

    def test_holonomy_at_z0(self):
        np.testing.assert_allclose(boundary_map(self.longitudes, self.z0), [0, 0, PI_I], atol=1e-10)

    def test_exp_of_log_curvature_is_curvature(self):
        z = random_shapes(self.convention, np.random.default_rng(3))
        np.testing.assert_allclose(np.exp(log_curvature(self.inc, z)), complex_curvature(self.inc, z), atol=1e-10)

    def test_constant_edge(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            z = random_shapes(self.convention, rng)
            self.assertAlmostEqual(complex_curvature(self.inc, z)[1], 1.0, delta=1e-12)
            self.assertAlmostEqual(log_curvature(self.inc, z)[1], 2 * PI_I, delta=1e-12)

    def test_angle_sum_and_gauss_bonnet(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            z = random_shapes(self.convention, rng)
            g = log_curvature(self.inc, z)
            self.assertLess(angle_sum_defect(self.t, g), 1e-9)
            self.assertTrue(all(check.ok for check in gauss_bonnet_check(self.t, self.inc, z)))

    def test_curvature_fiber_contains_both_solutions(self):
        lifts = curvature_fiber_lifts(self.t, self.inc, complex_curvature(self.inc, self.z0))
        for z in (self.z0, self.z1):
            g = log_curvature(self.inc, z)
            self.assertTrue(any(np.max(np.abs(lift - g)) < 1e-8 for lift in lifts))

    def test_requires_positive_shapes(self):
        z = ShapeAssignment(np.full(5, 2.0 + 0j), self.convention)
        with self.assertRaises(NotPositivelyOriented):
            log_curvature(self.inc, z)

    def test_degenerate_shape(self):
        z = ShapeAssignment(np.array([0.5 + 0.5j, 1.0, 0.5j, 0.5j, 0.5j]), self.convention)
        with self.assertRaises(DegenerateShape):
            complex_curvature(self.inc, z)


class JacobianTest(Table2Mixin, SimpleTestCase):

    def test_finite_differences(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            z = random_shapes(self.convention, rng)
            np.testing.assert_allclose(
                jacobian_G(self.inc, z),
                finite_difference_jacobian(lambda s: log_curvature(self.inc, s), z),
                rtol=1e-6, atol=1e-6,
            )
            np.testing.assert_allclose(
                jacobian_H(self.longitudes, z),
                finite_difference_jacobian(lambda s: boundary_map(self.longitudes, s), z),
                rtol=1e-6, atol=1e-6,
            )

    def test_jacobian_entries_match_closed_forms(self):
        order = self.bundle.published_edge_order
        rng = np.random.default_rng(4)
        for _ in range(5):
            z = random_shapes(self.convention, rng)
            z0, z1, z2, z3, z4 = z.preferred_values
            expected_g = np.array([
                [0, 1 / (1 - z1), 0, 0, 0],
                [1 / (z0 * (z0 - 1)), 1 / (1 - z1), 1 / z2, 1 / (z3 * (z3 - 1)), 1 / (z4 * (z4 - 1))],
                [0, 0, 0, 0, 0],
                [1 / (z0 * (1 - z0)), 2 / (z1 - 1), -1 / z2, 1 / (z3 * (1 - z3)), 1 / (z4 * (1 - z4))],
            ])
            # The (lambda1, z2) entry is +1/(z2(1 - z2)).
            expected_h = np.array([
                [1 / (1 - z0), 0, 1 / (z2 * (1 - z2)), 0, 0],
                [0, 0, 0, 1 / z3, -1 / z4],
                [1 / z0, -1 / (1 - z1), 1 / (1 - z2), 1 / (1 - z3), 1 / (1 - z4)],
            ])
            np.testing.assert_allclose(jacobian_G(self.inc, z)[order], expected_g, rtol=1e-10, atol=1e-10)
            np.testing.assert_allclose(jacobian_H(self.longitudes, z), expected_h, rtol=1e-10, atol=1e-10)

    def test_constant_rank(self):
        rng = np.random.default_rng(33)
        for _ in range(50):
            z = random_shapes(self.convention, rng)
            self.assertEqual(rank_numeric(jacobian_G(self.inc, z)), 2)
            stacked = np.vstack([jacobian_G(self.inc, z), jacobian_H(self.longitudes, z)])
            self.assertEqual(rank_numeric(stacked), 5)

    def test_minor_determinant_closed_form(self):
        # Rows kept: the valence-1 and valence-18 edges, then the three longitudes.
        rng = np.random.default_rng(8)
        for _ in range(20):
            z = random_shapes(self.convention, rng)
            w = z.preferred_values
            jac = jacobian_G(self.inc, z)
            minor = np.vstack([jac[[3, 2]], jacobian_H(self.longitudes, z)])
            z0, z2, z3, z4 = w[0], w[2], w[3], w[4]
            p = (-1 + z0 + z3 + z4 + z0 * z2 - z0 * z2 * z3 - z0 * z2 * z4 - z3 * z4 - z0 * z3 * z4
                 + z0 * z2 * z3 * z4)
            expected = -2 * p / (z0 * z2 * z3 * z4 * np.prod(1 - w))
            self.assertAlmostEqual(np.linalg.det(minor), expected, delta=1e-9 * max(1.0, abs(expected)))

    def test_table1_rank(self):
        table1 = load_fixture('table1')
        inc = quad_incidence(table1.triangulation)
        rng = np.random.default_rng(2)
        for _ in range(50):
            z = random_shapes(table1.convention, rng)
            self.assertEqual(rank_numeric(jacobian_G(inc, z)), 6)
