import numpy as np
from django.test import SimpleTestCase

from cone.accessors.fixture_accessors import load_fixture
from cone.exceptions import InvalidEdge, NotInvolutive, NotOrientable, ParseError, UnpairedFace
from cone.services.random_services import random_triangulation
from cone.services.triangulation_services import (
    census_summary,
    corner_class_index,
    edge_classes,
    is_connected,
    parse_triangulation,
    serialize_triangulation,
    vertex_classes,
)

# One tetrahedron: 012 <-> 013 fixing 0 and 1, 023 <-> 123 swapping 0 and 1.
SINGLE_TET = """
0 | 0 (013) | 0 (012) | 0 (123) | 0 (023)
"""

# Face 012 glued to itself by the transposition (0 1) reverses edge 01.
REVERSED_EDGE = """
0 | 0 (102) | 0 (103) | 0 (123) | 0 (023)
"""

# Every face glued to the same face of the other tetrahedron by the identity.
EVEN_DOUBLE = """
0 | 1 (012) | 1 (013) | 1 (023) | 1 (123)
1 | 0 (012) | 0 (013) | 0 (023) | 0 (123)
"""


class FixtureCountsTest(SimpleTestCase):
    """Counts of the two shipped triangulations."""

    def test_table2_counts(self):
        summary = census_summary(load_fixture('table2').triangulation)
        self.assertEqual(summary.tet_count, 5)
        self.assertEqual(summary.edge_count, 4)
        self.assertEqual(summary.vertex_count, 2)
        self.assertEqual(sorted(summary.genera), [1, 2])
        self.assertTrue(summary.lemma_ok)

    def test_table2_edge_valences(self):
        edges = edge_classes(load_fixture('table2').triangulation)
        self.assertEqual([e.valence for e in edges], [5, 6, 18, 1])

    def test_table2_vertex_genera_by_class(self):
        vertices = vertex_classes(load_fixture('table2').triangulation)
        self.assertEqual([v.genus for v in vertices], [2, 1])

    def test_table1_counts(self):
        summary = census_summary(load_fixture('table1').triangulation)
        self.assertEqual((summary.tet_count, summary.edge_count, summary.vertex_count), (7, 7, 1))
        self.assertEqual(summary.genera, (1,))
        self.assertTrue(summary.lemma_ok)

    def test_edges_partition_tetrahedron_edges(self):
        for name in ('table1', 'table2'):
            t = load_fixture(name).triangulation
            self.assertEqual(sum(e.valence for e in edge_classes(t)), 6 * t.tet_count)
            self.assertEqual(len(corner_class_index(t)), 4 * t.tet_count)

    def test_serialized_table_parses_back(self):
        t = load_fixture('table2').triangulation
        again = parse_triangulation(serialize_triangulation(t))
        self.assertEqual(again.pairings, t.pairings)


class SmallTriangulationTest(SimpleTestCase):

    def test_single_tetrahedron(self):
        t = parse_triangulation(SINGLE_TET)
        summary = census_summary(t)
        self.assertEqual((summary.tet_count, summary.edge_count, summary.vertex_count), (1, 3, 2))
        self.assertEqual(summary.genera, (0, 0))
        self.assertEqual(summary.edge_valences, (1, 4, 1))
        self.assertTrue(summary.lemma_ok)
        self.assertTrue(is_connected(t))

    def test_random_triangulations_satisfy_euler_count(self):
        rng = np.random.default_rng(11)
        for n in (1, 2, 3, 4, 5):
            t = random_triangulation(n, rng)
            summary = census_summary(t)
            self.assertTrue(summary.lemma_ok)
            self.assertTrue(is_connected(t))
            self.assertEqual(sum(summary.edge_valences), 6 * n)


class ParseErrorsTest(SimpleTestCase):

    def test_empty_input(self):
        with self.assertRaises(ParseError) as ctx:
            parse_triangulation('   \n# only a comment\n')
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_garbage(self):
        with self.assertRaises(ParseError):
            parse_triangulation('this is not a triangulation')

    def test_bad_cell(self):
        with self.assertRaises(ParseError) as ctx:
            parse_triangulation('0 | 0 (01) | 0 (012) | 0 (123) | 0 (023)')
        self.assertEqual(ctx.exception.details['line'], 1)

    def test_unpaired_face(self):
        with self.assertRaises(UnpairedFace):
            parse_triangulation('0 | - | 0 (012) | 0 (123) | 0 (023)')

    def test_not_involutive(self):
        text = load_fixture('table2').path.read_text().replace('0 | 2 (032)', '0 | 3 (032)')
        with self.assertRaises(NotInvolutive):
            parse_triangulation(text)

    def test_even_gluing_is_not_orientable(self):
        with self.assertRaises(NotOrientable):
            parse_triangulation(EVEN_DOUBLE)

    def test_edge_glued_to_its_reverse(self):
        with self.assertRaises(InvalidEdge) as ctx:
            parse_triangulation(REVERSED_EDGE)
        self.assertEqual(ctx.exception.exit_code, 2)
