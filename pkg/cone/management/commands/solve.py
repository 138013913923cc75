"""
Solve (G, H_L)(z) = (u, t) for positively oriented shapes by damped
Gauss-Newton from a starting assignment.
"""
import numpy as np
from django.conf import settings

from cone.accessors.fixture_accessors import load_target
from cone.management.commands._base import ConeCommand
from cone.services.gluing_services import log_curvature
from cone.services.peripheral_services import boundary_map
from cone.services.random_services import perturb_shapes
from cone.services.solver_services import GaussNewtonSolver, check_feasibility, positivity_check
from cone.utils.logging_config import PerformanceLogger


class Command(ConeCommand):
    help = 'Gauss-Newton solve for shapes with prescribed log-curvature and longitude holonomy'
    command_name = 'solve'

    def add_command_arguments(self, parser):
        parser.add_argument('triangulation', help='Path to a .tri file or a fixture name')
        parser.add_argument('--target', required=True,
                            help='Target JSON file {"u": [...], "t": [...]}, or stored names such as "u0+t0"')
        parser.add_argument('--start', required=True,
                            help='Start shape JSON file, or a shape name stored with the fixture')
        parser.add_argument('--curves', default=None,
                            help='Curve file; defaults to the sidecar curves when the target has holonomies')
        parser.add_argument('--perturb', type=float, default=0.0,
                            help='Perturb the start by a random offset of this radius (seeded)')
        parser.add_argument('--max-iterations', type=int, default=None)

    def run(self, **options):
        bundle = self.load_bundle(options['triangulation'], options)
        t = bundle.triangulation
        target = load_target(options['target'], bundle)
        check_feasibility(target, t.tet_count, options['tol'])

        curves = self.load_curves(options, bundle, default=target.t.size > 0)
        longitudes = [c for c in curves if c.role == 'longitude']
        if target.t.size == 0 and longitudes:
            longitudes = []

        start = self.load_shapes(options['start'], bundle)
        if options['perturb'] > 0:
            seed = settings.CONE_DEFAULT_SEED if options['seed'] is None else options['seed']
            start = perturb_shapes(start, options['perturb'], np.random.default_rng(seed))
        max_iterations = options['max_iterations']
        if max_iterations is not None:
            max_iterations = self.count(max_iterations, 'max_iterations')

        solver = GaussNewtonSolver(t, longitudes, tol=options['tol'], max_iterations=max_iterations,
                                   rank_tol=options['rank_tol'])
        with PerformanceLogger(f'solve {bundle.name}'):
            result = solver.solve(target, start)

        return {
            'name': bundle.name,
            'start': start.preferred_values,
            'result': result.to_dict(),
            'G': log_curvature(solver.incidence, result.z),
            'H': boundary_map(longitudes, result.z),
            'positivity': positivity_check(result.z).to_dict(),
        }

    def headline(self, data):
        result = data['result']
        return (f"converged={result['converged']} iterations={result['iterations']} "
                f"residual={result['residual_norm']:.3e}")
