"""
Run the invariant suite on a triangulation, or on a batch of random
triangulations with `verify random`. Exits 1 with the failed checks listed.
"""
from django.conf import settings

from cone.exceptions import VerificationFailed
from cone.management.commands._base import ConeCommand
from cone.services.verification_services import verify_random, verify_triangulation
from cone.utils.logging_config import PerformanceLogger

RANDOM = 'random'


class Command(ConeCommand):
    help = 'Check the rank, dimension, pairing and Jacobian identities; "random" checks random triangulations'
    command_name = 'verify'

    def add_command_arguments(self, parser):
        parser.add_argument('triangulation', help='Path to a .tri file, a fixture name, or "random"')
        parser.add_argument('--curves', default=None,
                            help='Curve file (longitudes, optional meridians), or "default"')
        parser.add_argument('--samples', type=int, default=None,
                            help='Random shape points per triangulation (default: CONE_VERIFY_SAMPLES)')
        parser.add_argument('--count', type=int, default=25, help='Number of random triangulations')
        parser.add_argument('--max-tetrahedra', type=int, default=None,
                            help='Largest random triangulation (default: CONE_RANDOM_MAX_TETRAHEDRA)')
        parser.add_argument('--jobs', type=int, default=None, help='Worker threads for random instances')

    def run(self, **options):
        seed = settings.CONE_DEFAULT_SEED if options['seed'] is None else options['seed']
        samples = options['samples']
        if samples is not None:
            samples = self.count(samples, 'samples')

        if options['triangulation'] == RANDOM:
            count = self.count(options['count'], 'count')
            reports = verify_random(count, seed=seed, samples=samples if samples is not None else 5,
                                    max_tetrahedra=options['max_tetrahedra'], n_jobs=options['jobs'])
            return {
                'name': RANDOM,
                'seed': seed,
                'passed': all(report.passed for report in reports),
                'reports': [self.summarize(report) for report in reports],
            }

        bundle = self.load_bundle(options['triangulation'], options)
        curves = self.load_curves(options, bundle)
        with PerformanceLogger(f'verify {bundle.name}'):
            report = verify_triangulation(bundle.triangulation, bundle.convention, curves,
                                          samples=samples, seed=seed, label=bundle.name)
        data = self.summarize(report)
        data['seed'] = seed
        return data

    @staticmethod
    def summarize(report) -> dict:
        data = report.to_dict()
        data['failures'] = [check.name for check in report.failures]
        return data

    def failure(self, data):
        if data['passed']:
            return None
        if 'reports' in data:
            failures = [f"{r['label']}: {name}" for r in data['reports'] for name in r['failures']]
        else:
            failures = data['failures']
        return VerificationFailed(f"{len(failures)} check(s) failed: {', '.join(failures)}", failures=failures)

    def headline(self, data):
        if 'reports' in data:
            passed = sum(1 for r in data['reports'] if r['passed'])
            return f"{passed}/{len(data['reports'])} random triangulations pass"
        checks = data['checks']
        skipped = sum(1 for c in checks if c['skipped'])
        return f"{data['label']}: {len(checks) - skipped - len(data['failures'])} passed, " \
               f"{len(data['failures'])} failed, {skipped} skipped"
