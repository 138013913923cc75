import json
import math
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from cone.accessors.fixture_accessors import (
    convention_from_dict,
    curves_from_dict,
    load_fixture,
    load_shapes,
    load_target,
    meridians,
    shapes_from_dict,
)
from cone.exceptions import ParseError, ValidationError
from cone.models.shape_model import QuadConvention
from cone.serializers.field_serializers import ComplexField
from cone.utils.report_builder import ReportBuilder, format_number, to_jsonable
from cone.utils.validators import ConventionValidator, CountValidator, ToleranceValidator


class FixtureLoadingTest(SimpleTestCase):

    def test_unknown_fixture(self):
        with self.assertRaises(ValidationError):
            load_fixture('table9')

    def test_stored_target_names(self):
        bundle = load_fixture('table2')
        target = load_target('u0+t0', bundle)
        self.assertEqual(target.u.shape, (4,))
        self.assertAlmostEqual(target.t[2], math.pi * 1j, places=12)
        self.assertEqual(load_target('u1', bundle).t.size, 0)

    def test_target_file(self):
        bundle = load_fixture('table2')
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'target.json'
            path.write_text(json.dumps({'u': [[0, 1], 2.5]}))
            target = load_target(str(path), bundle)
            np.testing.assert_array_equal(target.u, [1j, 2.5])
            path.write_text('{not json')
            with self.assertRaises(ValidationError):
                load_target(str(path), bundle)

    def test_shapes_by_name(self):
        z = load_shapes('z1', load_fixture('table2'))
        self.assertAlmostEqual(z.preferred_values[2], complex(-0.8660254037844386, 0.5), places=15)

    def test_shape_file_validation(self):
        convention = QuadConvention.default(2)
        with self.assertRaises(ValidationError):
            shapes_from_dict({'0': [0, 1], '2': [0, 1]}, convention)
        with self.assertRaises(ValidationError):
            shapes_from_dict({'0': [0, 1]}, convention)
        with self.assertRaises(ValidationError):
            shapes_from_dict({'0': 'abc', '1': [0, 1]}, convention)
        z = shapes_from_dict({'shapes': {'1': [0, 2], '0': [0, 1]}}, convention)
        np.testing.assert_array_equal(z.preferred_values, [1j, 2j])

    def test_convention_validation(self):
        self.assertEqual(convention_from_dict({'preferred': ['01', '13'], 'orientation': -1}, 2),
                         QuadConvention((0, 1), -1))
        self.assertEqual(convention_from_dict(None, 3), QuadConvention.default(3))
        with self.assertRaises(ValidationError):
            convention_from_dict({'preferred': [0, 0]}, 3)
        with self.assertRaises(ValidationError):
            convention_from_dict({'preferred': ['05']}, 1)


class CurveFileTest(SimpleTestCase):

    def setUp(self):
        self.bundle = load_fixture('table2')

    def load(self, data):
        return curves_from_dict(data, self.bundle.triangulation, self.bundle.convention)

    def test_index_vector_entries(self):
        curves = self.load({'format': 'indvector', 'curves': [
            {'name': 'a', 'entries': [[3, 0, 1], [4, 0, -1]]},
            {'name': 'b', 'role': 'meridian', 'entries': [[0, 0, 1]], 'dual': 'a'},
        ]})
        self.assertEqual(curves[0].role, 'longitude')
        self.assertEqual([c.name for c in meridians(curves)], ['b'])
        self.assertEqual(int(np.abs(curves[0].index_vector).sum()), 2)
        self.assertFalse(curves[0].index_vector.flags.writeable)

    def test_rejected_files(self):
        for data in (
            {'format': 'svg', 'curves': []},
            {'format': 'indvector', 'curves': [{'name': 'a'}]},
            {'format': 'indvector', 'curves': [{'name': 'a', 'entries': [[0, 3, 1]]}]},
            {'format': 'indvector', 'curves': [{'name': 'a', 'entries': [[0, 0, 1]]},
                                               {'name': 'a', 'entries': [[1, 0, 1]]}]},
            {'format': 'arcpath', 'curves': [{'name': 'a', 'steps': [[0, 0, 1, 2]]}]},
        ):
            with self.assertRaises(ValidationError):
                self.load(data)

    def test_entry_outside_triangulation(self):
        with self.assertRaises(ValidationError):
            self.load({'format': 'indvector', 'curves': [{'name': 'a', 'entries': [[7, 0, 1]]}]})


class FieldAndValidatorTest(SimpleTestCase):

    def test_complex_field(self):
        field = ComplexField()
        self.assertEqual(field.to_internal_value([1, -2]), complex(1, -2))
        self.assertEqual(field.to_internal_value(3), complex(3, 0))
        self.assertEqual(field.to_representation(2j), [0.0, 2.0])

    def test_base_edges(self):
        self.assertEqual(ConventionValidator.parse_base_edges('12', 3).preferred, (2, 2, 2))
        self.assertEqual(ConventionValidator.parse_base_edges('01,31', 2).preferred, (0, 1))
        self.assertEqual(ConventionValidator.parse_base_edges(None, 2, reverse=True).orientation, -1)
        with self.assertRaises(ValidationError):
            ConventionValidator.parse_base_edges('01,12', 3)
        with self.assertRaises(ValidationError):
            ConventionValidator.parse_base_edges('11', 1)

    def test_tolerance_and_count(self):
        self.assertIsNone(ToleranceValidator.validate(None))
        self.assertEqual(ToleranceValidator.validate('1e-6'), 1e-6)
        with self.assertRaises(ValidationError):
            ToleranceValidator.validate(0.0)
        with self.assertRaises(ValidationError):
            CountValidator.validate(0, 'count')


class ReportBuilderTest(SimpleTestCase):

    def test_jsonable(self):
        data = to_jsonable({'z': np.array([1 + 2j]), 'n': np.int64(3), 'ok': np.bool_(True), 'x': float('inf')})
        self.assertEqual(data, {'z': [[1.0, 2.0]], 'n': 3, 'ok': True, 'x': 'inf'})

    def test_error_report(self):
        report = ReportBuilder.error(ParseError('Bad cell', line=4), 'analyze')
        self.assertEqual(report['exit_code'], 2)
        self.assertEqual(report['error']['error_code'], 'PARSE_ERROR')
        self.assertEqual(report['error']['details']['line'], 4)

    def test_human_output(self):
        self.assertEqual(format_number(complex(1.5, -2)), '1.5-2i')
        self.assertEqual(format_number(2j), '2i')
        lines = ReportBuilder.human_lines({'name': 'table2', 'G': [1j, 2], 'sub': {'ok': True}})
        self.assertEqual(lines, ['name: table2', 'G: [1i, 2]', 'sub:', '  ok: True'])
