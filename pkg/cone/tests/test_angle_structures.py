import numpy as np
from django.test import SimpleTestCase

from cone.accessors.fixture_accessors import load_curves, load_fixture
from cone.models.shape_model import QuadConvention
from cone.services.angle_structure_services import (
    edge_deformations,
    expected_tas_dimension,
    is_in_tas,
    leading_trailing_curve,
    leading_trailing_edge,
    pairing,
    span_report,
    stas_basis,
    tas_basis,
)
from cone.services.gluing_services import quad_incidence
from cone.services.random_services import random_triangulation
from cone.services.triangulation_services import census_summary, parse_triangulation
from cone.tests.test_triangulation import SINGLE_TET


class TangentSpaceTest(SimpleTestCase):

    def test_fixture_dimensions(self):
        for name in ('table1', 'table2'):
            t = load_fixture(name).triangulation
            summary = census_summary(t)
            basis = tas_basis(quad_incidence(t))
            self.assertEqual(len(basis), 8)
            self.assertEqual(len(basis), expected_tas_dimension(t.tet_count, summary.edge_count,
                                                                 summary.vertex_count))

    def test_basis_vectors_are_integral_members(self):
        inc = quad_incidence(load_fixture('table2').triangulation)
        for w in tas_basis(inc):
            self.assertEqual(w.dtype.kind, 'i')
            self.assertTrue(is_in_tas(inc, w))

    def test_float_basis_matches_exact_dimension(self):
        inc = quad_incidence(load_fixture('table1').triangulation)
        floats = tas_basis(inc, exact=False)
        self.assertEqual(len(floats), len(tas_basis(inc)))
        self.assertTrue(all(is_in_tas(inc, w) for w in floats))

    def test_single_tetrahedron(self):
        inc = quad_incidence(parse_triangulation(SINGLE_TET))
        basis = tas_basis(inc)
        self.assertEqual(len(basis), 1)
        w = basis[0]
        self.assertEqual(w[0], 0)
        self.assertEqual(w[1], -w[2])

    def test_random_triangulations(self):
        rng = np.random.default_rng(17)
        for n in (1, 2, 3, 4):
            t = random_triangulation(n, rng)
            summary = census_summary(t)
            inc = quad_incidence(t)
            self.assertEqual(len(tas_basis(inc)),
                             expected_tas_dimension(n, summary.edge_count, summary.vertex_count))
            convention = QuadConvention.default(n)
            q_edges = edge_deformations(inc, convention)
            self.assertTrue(all(is_in_tas(inc, q) for q in q_edges))
            self.assertEqual(span_report(q_edges).dimension, n - summary.genus_sum)


class Table2DeformationTest(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.bundle = load_fixture('table2')
        cls.convention = cls.bundle.convention
        cls.inc = quad_incidence(cls.bundle.triangulation)
        cls.curves = {c.name: c for c in load_curves('default', cls.bundle)}
        cls.longitudes = [cls.curves[name] for name in ('lambda1', 'lambda2', 'lambda3')]
        cls.q_edges = edge_deformations(cls.inc, cls.convention)
        cls.q_longitudes = [leading_trailing_curve(c.index_vector, cls.convention) for c in cls.longitudes]
        cls.stas = stas_basis(cls.inc, [c.index_vector for c in cls.longitudes])

    def test_edge_deformations(self):
        for e in range(self.inc.edge_count):
            q_e = leading_trailing_edge(self.inc, e, self.convention)
            self.assertTrue(is_in_tas(self.inc, q_e))
            np.testing.assert_array_equal(q_e, self.q_edges[e])
        # Every quad faces exactly two tetrahedron edges.
        np.testing.assert_array_equal(sum(self.q_edges), np.zeros(15, dtype=np.int64))

    def test_edge_deformations_span(self):
        report = span_report(self.q_edges, {'TAS': tas_basis(self.inc)})
        self.assertEqual(report.dimension, 2)
        self.assertTrue(report.contained_in['TAS'])

    def test_stas_dimension(self):
        self.assertEqual(len(self.stas), 5)

    def test_deformations_in_stas(self):
        report = span_report(self.q_edges + self.q_longitudes, {'STAS': self.stas})
        self.assertTrue(report.contained_in['STAS'])
        self.assertTrue(report.equals['STAS'])
        self.assertEqual(report.dimension, 5)

    def test_longitudes_pair_trivially(self):
        for a in self.longitudes:
            for q in self.q_longitudes + self.q_edges:
                self.assertEqual(pairing(a.index_vector, q), 0)

    def test_meridian(self):
        meridian = self.curves['mu1']
        q_meridian = leading_trailing_curve(meridian.index_vector, self.convention)
        self.assertTrue(is_in_tas(self.inc, q_meridian))
        self.assertEqual(abs(pairing(meridian.index_vector, self.q_longitudes[0])), 2)
        self.assertEqual(pairing(meridian.index_vector, self.q_longitudes[1]), 0)
        self.assertEqual(pairing(meridian.index_vector, self.q_longitudes[2]), 0)
        report = span_report([q_meridian], {'STAS': self.stas, 'edges': self.q_edges})
        self.assertTrue(report.trivial_intersection['STAS'])
        self.assertTrue(report.trivial_intersection['edges'])

    def test_pairing_is_antisymmetric(self):
        meridian = self.curves['mu1']
        lam = self.longitudes[0]
        self.assertEqual(
            pairing(meridian.index_vector, leading_trailing_curve(lam.index_vector, self.convention)),
            -pairing(lam.index_vector, leading_trailing_curve(meridian.index_vector, self.convention)),
        )
