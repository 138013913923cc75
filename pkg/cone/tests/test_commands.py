import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from cone.accessors.fixture_accessors import load_fixture
from cone.services.verification_services import VerificationReport


def run_json(*args, **options):
    out = StringIO()
    call_command(*args, '--json', stdout=out, **options)
    return json.loads(out.getvalue())


def run_text(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


class SettingsTest(SimpleTestCase):

    def test_logging_settings_keep_django_defaults(self):
        self.assertEqual(settings.LOGGING_CONFIG, 'logging.config.dictConfig')
        self.assertEqual(settings.LOGGING['version'], 1)
        self.assertIn('cone', settings.LOGGING['loggers'])


class AnalyzeCommandTest(SimpleTestCase):

    def test_headline(self):
        output = run_text('analyze', 'table2')
        self.assertIn('|T|=5 |E|=4 |V|=2 genera=[1,2] rank(B)=2 dimTAS=8', output)

    def test_human_lists_are_bracketed(self):
        output = run_text('analyze', 'table1')
        self.assertIn('genera: [1]', output)
        self.assertNotIn('(1)', output)

    def test_json_report(self):
        report = run_json('analyze', 'table1')
        self.assertTrue(report['success'])
        data = report['data']
        self.assertEqual((data['tet_count'], data['edge_count'], data['vertex_count']), (7, 7, 1))
        self.assertEqual(data['neumann_rank'], data['tet_count_minus_genus_sum'])
        self.assertEqual(data['tas_dimension'], 8)

    def test_reads_a_path(self):
        path = str(load_fixture('table2').path)
        self.assertEqual(run_json('analyze', path)['data']['edge_count'], 4)

    def test_output_is_deterministic(self):
        self.assertEqual(run_text('analyze', 'table2', '--json'), run_text('analyze', 'table2', '--json'))

    def test_missing_file(self):
        out = StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command('analyze', '/nonexistent/cusp.tri', '--json', stdout=out)
        self.assertEqual(ctx.exception.returncode, 2)
        report = json.loads(out.getvalue())
        self.assertFalse(report['success'])
        self.assertEqual(report['error']['error_code'], 'VALIDATION_ERROR')

    def test_malformed_triangulation(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'broken.tri'
            path.write_text('0 | - | 0 (012) | 0 (123) | 0 (023)\n')
            with self.assertRaises(CommandError) as ctx:
                run_text('analyze', str(path))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_tolerance(self):
        with self.assertRaises(CommandError) as ctx:
            run_text('analyze', 'table2', '--tol', '-1')
        self.assertEqual(ctx.exception.returncode, 2)


class EquationsCommandTest(SimpleTestCase):

    def test_monomials_in_relabelled_order(self):
        data = run_json('equations', 'table2', '--published-order', '--curves', 'default', '--matrices')['data']
        expected = load_fixture('table2').metadata
        self.assertEqual([row['monomial'] for row in data['curvature']], expected['curvature_monomials'])
        self.assertEqual([row['valence'] for row in data['curvature']], [1, 5, 6, 18])
        longitudes = [row['monomial'] for row in data['holonomy'] if row['role'] == 'longitude']
        self.assertEqual(longitudes, expected['holonomy_monomials'])
        self.assertEqual(data['neumann_rank'], 2)
        self.assertEqual(len(data['quads']), 15)


class TasCommandTest(SimpleTestCase):

    def test_table2_with_curves(self):
        data = run_json('tas', 'table2', '--curves', 'default')['data']
        self.assertEqual(data['tas_dimension'], 8)
        self.assertEqual(data['edge_deformations']['dimension'], 2)
        self.assertEqual(data['stas_dimension'], 5)
        self.assertTrue(data['edge_and_longitude_span']['equals']['STAS'])
        self.assertTrue(data['meridian_span']['trivial_intersection']['STAS'])
        values = {(p['curve'], p['deformation']): p['value'] for p in data['pairings']}
        self.assertEqual(values[('lambda1', 'lambda3')], 0)
        self.assertEqual(abs(values[('mu1', 'lambda1')]), 2)

    def test_independent_of_base_edges(self):
        data = run_json('tas', 'table2', '--base-edge', '01', '--reverse-orientation')['data']
        self.assertEqual(data['edge_deformations']['dimension'], 2)


class EvalCommandTest(SimpleTestCase):

    def test_table2_at_z0(self):
        data = run_json('eval', 'table2', '--shapes', 'z0', '--curves', 'default', '--published-order',
                        '--jacobian')['data']
        self.assertTrue(data['positivity']['positive'])
        for actual, expected in zip(data['G_over_pi_i'], [1 / 3, 5 / 3, 2, 6]):
            self.assertAlmostEqual(actual, expected, places=10)
        self.assertAlmostEqual(data['volume'], 5 * 1.0149416064096536, places=10)
        self.assertAlmostEqual(data['H']['lambda3'][1], 3.141592653589793, places=10)
        self.assertEqual(data['rank_dG'], 2)
        self.assertEqual(data['stacked_rank'], 5)

    def test_shapes_survive_base_edge_override(self):
        default = run_json('eval', 'table2', '--shapes', 'z1')['data']
        moved = run_json('eval', 'table2', '--shapes', 'z1', '--base-edge', '01')['data']
        for a, b in zip(default['G_over_pi_i'], moved['G_over_pi_i']):
            self.assertAlmostEqual(a, b, places=10)

    def test_non_positive_shapes(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'flat.json'
            path.write_text(json.dumps({str(k): [2.0, 0.0] for k in range(5)}))
            data = run_json('eval', 'table2', '--shapes', str(path))['data']
        self.assertFalse(data['positivity']['positive'])
        self.assertNotIn('G', data)


class SolveCommandTest(SimpleTestCase):

    def test_recovers_z0(self):
        data = run_json('solve', 'table2', '--target', 'u0+t0', '--start', 'z0', '--perturb', '0.1')['data']
        self.assertTrue(data['result']['converged'])
        self.assertLessEqual(data['result']['residual_norm'], 1e-12)
        for re_im in data['result']['z']:
            self.assertAlmostEqual(re_im[0], 0.5, places=9)
            self.assertAlmostEqual(re_im[1], 0.8660254037844386, places=9)

    def test_infeasible_target_exit_code(self):
        u = [[0, 5.235987755982989], [0, 6.283185307179586], [0, 18.84955592153876], [0, 1.5]]
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'target.json'
            path.write_text(json.dumps({'u': u, 't': [[0, 0], [0, 0], [0, 3.141592653589793]]}))
            out = StringIO()
            with self.assertRaises(CommandError) as ctx:
                call_command('solve', 'table2', '--target', str(path), '--start', 'z0', '--json', stdout=out)
        self.assertEqual(ctx.exception.returncode, 3)
        self.assertEqual(json.loads(out.getvalue())['error']['error_code'], 'INFEASIBLE_TARGET')


class TraceCommandTest(SimpleTestCase):

    def test_loop_closes(self):
        data = run_json('trace', 'table2', '--target', 'u0+t0', '--start', 'z0', '--loop', '1')['data']
        self.assertEqual(len(data['points']), 21)
        self.assertLess(data['loop_closure'], 1e-8)

    def test_vary_past_the_boundary_fails(self):
        with self.assertRaises(CommandError) as ctx:
            run_text('trace', 'table2', '--target', 'u0+t0', '--start', 'z0', '--vary', '1', '--to', '0,3.5',
                     '--steps', '14')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_vary_needs_end(self):
        with self.assertRaises(CommandError) as ctx:
            run_text('trace', 'table2', '--target', 'u0+t0', '--start', 'z0', '--vary', '1')
        self.assertEqual(ctx.exception.returncode, 2)


class VerifyCommandTest(SimpleTestCase):

    def test_table2_passes(self):
        data = run_json('verify', 'table2', '--curves', 'default', '--samples', '5')['data']
        self.assertTrue(data['passed'], data['failures'])
        names = {check['name'] for check in data['checks']}
        self.assertIn('meridian_pairings', names)
        self.assertIn('rank_stacked', names)

    def test_random_triangulations_pass(self):
        data = run_json('verify', 'random', '--count', '3', '--samples', '2', '--max-tetrahedra', '3')['data']
        self.assertTrue(data['passed'])
        self.assertEqual(len(data['reports']), 3)

    def test_failed_checks_mark_the_report_unsuccessful(self):
        report = VerificationReport(label='table2')
        report.add('neumann_rank', False, 'rank=1 expected=2')
        out = StringIO()
        with mock.patch('cone.management.commands.verify.verify_triangulation', return_value=report):
            with self.assertRaises(CommandError) as ctx:
                call_command('verify', 'table2', '--json', stdout=out)
        self.assertEqual(ctx.exception.returncode, 1)
        envelope = json.loads(out.getvalue())
        self.assertFalse(envelope['success'])
        self.assertEqual(envelope['data']['failures'], ['neumann_rank'])

    def test_passing_run_is_successful(self):
        envelope = run_json('verify', 'table2', '--samples', '2')
        self.assertTrue(envelope['success'])
        self.assertTrue(envelope['data']['passed'])

    def test_same_seed_same_report(self):
        args = ('verify', 'random', '--count', '2', '--samples', '1', '--max-tetrahedra', '2', '--seed', '3')
        self.assertEqual(run_json(*args), run_json(*args))


class FixturesCommandTest(SimpleTestCase):

    def test_listing(self):
        data = run_json('fixtures')['data']
        names = [entry['name'] for entry in data['fixtures']]
        self.assertEqual(names, ['table1', 'table2', 'phi0'])
        self.assertEqual(data['fixtures'][2]['components'], 7)

    def test_replay_all(self):
        data = run_json('fixtures', 'all', '--samples', '5')['data']
        self.assertTrue(data['passed'], [r['failures'] for r in data['reports']])

    def test_unknown_fixture(self):
        with self.assertRaises(CommandError) as ctx:
            run_text('fixtures', 'table9')
        self.assertEqual(ctx.exception.returncode, 2)
