"""
Predictor-corrector continuation inside a level set G^-1(u) along a path of
longitude holonomy targets.
"""
import math

import numpy as np

from cone.accessors.fixture_accessors import complex_list, load_target, read_json
from cone.exceptions import ConvergenceError, ValidationError
from cone.management.commands._base import ConeCommand
from cone.services.solver_services import positivity_check, trace_level_set
from cone.utils.logging_config import PerformanceLogger


def parse_complex(text: str, field_name: str) -> complex:
    """'re,im' or a Python complex literal such as '0+3.2j'."""
    try:
        if ',' in text:
            re_part, im_part = text.split(',', 1)
            return complex(float(re_part), float(im_part))
        return complex(text.replace(' ', '').replace('i', 'j'))
    except ValueError:
        raise ValidationError(f"Invalid complex number '{text}' for {field_name}", field=field_name)


class Command(ConeCommand):
    help = 'Trace the level set G^-1(u) along a path of holonomy targets'
    command_name = 'trace'

    def add_command_arguments(self, parser):
        parser.add_argument('triangulation', help='Path to a .tri file or a fixture name')
        parser.add_argument('--target', required=True,
                            help='Target with u and the starting holonomy t, e.g. "u0+t0"')
        parser.add_argument('--start', required=True, help='Start shape file or stored shape name')
        parser.add_argument('--curves', default=None,
                            help='Curve file; defaults to the curves named in the sidecar')
        path = parser.add_mutually_exclusive_group(required=True)
        path.add_argument('--path', help='JSON file with a list of holonomy targets')
        path.add_argument('--vary', type=int, help='Index of the longitude whose holonomy moves linearly')
        path.add_argument('--loop', type=int, help='Index of the longitude whose holonomy runs round a circle')
        parser.add_argument('--to', default=None, help='End value for --vary, as "re,im"')
        parser.add_argument('--radius', type=float, default=0.05, help='Circle radius for --loop')
        parser.add_argument('--steps', type=int, default=20, help='Number of path segments')
        parser.add_argument('--max-corrector-iterations', type=int, default=None)

    def holonomy_path(self, options, start: np.ndarray) -> list:
        if options['path']:
            data = read_json(options['path'])
            points = data['path'] if isinstance(data, dict) else data
            return [complex_list(point) for point in points]

        steps = self.count(options['steps'], 'steps')
        index = options['vary'] if options['vary'] is not None else options['loop']
        if not 0 <= index < start.size:
            raise ValidationError(f"Curve index {index} is outside 0..{start.size - 1}", field='curve_index')
        unit = np.zeros(start.size, dtype=complex)
        unit[index] = 1.0

        if options['vary'] is not None:
            if options['to'] is None:
                raise ValidationError("--vary needs --to", field='to')
            end = parse_complex(options['to'], 'to')
            return [start + (k / steps) * (end - start[index]) * unit for k in range(steps + 1)]

        radius = options['radius']
        return [start + radius * (np.exp(2j * math.pi * k / steps) - 1.0) * unit for k in range(steps + 1)]

    def run(self, **options):
        bundle = self.load_bundle(options['triangulation'], options)
        target = load_target(options['target'], bundle)
        curves = self.load_curves(options, bundle, default=True)
        longitudes = [c for c in curves if c.role == 'longitude']
        start = self.load_shapes(options['start'], bundle)
        path = self.holonomy_path(options, target.t)

        try:
            with PerformanceLogger(f'trace {bundle.name} over {len(path)} points'):
                results = trace_level_set(bundle.triangulation, longitudes, target.u, start, path,
                                          tol=options['tol'],
                                          max_corrector_iterations=options['max_corrector_iterations'],
                                          rank_tol=options['rank_tol'])
        except ConvergenceError as exc:
            if exc.last_result is not None:
                exc.details['last_result'] = exc.last_result.to_dict()
            raise

        points = [
            {
                't': holonomy,
                'z': result.z.preferred_values,
                'residual_norm': result.residual_norm,
                'iterations': result.iterations,
                'min_margin': positivity_check(result.z).min_margin,
            }
            for holonomy, result in zip(path, results)
        ]
        data = {'name': bundle.name, 'points': points}
        if options['loop'] is not None and results:
            data['loop_closure'] = float(np.max(np.abs(results[-1].z.preferred_values
                                                       - results[0].z.preferred_values)))
        return data

    def headline(self, data):
        line = f"{len(data['points'])} points traced"
        if 'loop_closure' in data:
            line += f", loop closure {data['loop_closure']:.3e}"
        return line
