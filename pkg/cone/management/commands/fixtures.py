"""
List the shipped example data or replay it against the values it records.
"""
from django.conf import settings

from cone.accessors.fixture_accessors import DATA_DIR, load_curves, load_fixture, load_parametrization
from cone.constants import FIXTURE_NAMES
from cone.exceptions import ValidationError, VerificationFailed
from cone.management.commands._base import ConeCommand
from cone.services.parametrization_services import poles
from cone.services.verification_services import replay_table1, replay_table2


class Command(ConeCommand):
    help = 'List fixtures, or replay table1 / table2 / phi0 against their stored values'
    command_name = 'fixtures'

    def add_command_arguments(self, parser):
        parser.add_argument('name', nargs='?', default=None,
                            help='Fixture to replay: table1, table2, phi0 or all; omit to list')
        parser.add_argument('--samples', type=int, default=20, help='Sample points for the phi0 checks')

    def run(self, **options):
        name = options['name']
        if name is None:
            return {'data_dir': str(DATA_DIR), 'fixtures': self.listing()}
        if name != 'all' and name not in FIXTURE_NAMES:
            raise ValidationError(f"Unknown fixture '{name}'; choose from {', '.join(FIXTURE_NAMES)} or all",
                                  field='name')

        seed = settings.CONE_DEFAULT_SEED if options['seed'] is None else options['seed']
        samples = self.count(options['samples'], 'samples')
        reports = []
        if name in ('table1', 'phi0', 'all'):
            reports.append(replay_table1(load_fixture('table1'), load_parametrization('phi0'), samples, seed))
        if name in ('table2', 'all'):
            bundle = load_fixture('table2')
            reports.append(replay_table2(bundle, load_curves('default', bundle)))

        return {
            'name': name,
            'passed': all(report.passed for report in reports),
            'reports': [dict(report.to_dict(), failures=[c.name for c in report.failures]) for report in reports],
        }

    @staticmethod
    def listing() -> list:
        entries = []
        for name in ('table1', 'table2'):
            bundle = load_fixture(name)
            entries.append({
                'name': name,
                'tet_count': bundle.triangulation.tet_count,
                'convention': bundle.convention.to_dict(),
                'shapes': sorted(bundle.metadata.get('shapes', {})),
                'log_curvatures': sorted(bundle.metadata.get('log_curvatures', {})),
                'holonomies': sorted(bundle.metadata.get('holonomies', {})),
                'curves': bundle.metadata.get('curves'),
            })
        param = load_parametrization('phi0')
        entries.append({'name': 'phi0', 'components': param.component_count, 'poles': poles(param)})
        return entries

    def failure(self, data):
        if data.get('passed', True):
            return None
        failures = [f"{r['label']}: {name}" for r in data['reports'] for name in r['failures']]
        return VerificationFailed(f"Fixture replay failed: {', '.join(failures)}", failures=failures)
