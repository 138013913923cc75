"""
Evaluate the gluing system at given shapes: G, c, H_L, volume and the
Gauss-Bonnet report, optionally with the Jacobians.
"""
import numpy as np

from cone.management.commands._base import ConeCommand
from cone.services.geometry_services import angles_from_shapes, volume
from cone.services.gluing_services import (
    angle_sum_defect,
    complex_curvature,
    gauss_bonnet_from_log_curvature,
    jacobian_G,
    jacobian_term_scale,
    log_curvature,
    quad_incidence,
    reorder_edges,
)
from cone.services.linear_algebra_services import rank_numeric
from cone.services.peripheral_services import boundary_map, curve_matrix, jacobian_H
from cone.services.solver_services import positivity_check


class Command(ConeCommand):
    help = 'Evaluate G, c, H_L, volume and Gauss-Bonnet at a shape assignment'
    command_name = 'eval'

    def add_command_arguments(self, parser):
        parser.add_argument('triangulation', help='Path to a .tri file or a fixture name')
        parser.add_argument('--shapes', required=True,
                            help='Shape JSON file, or a shape name stored with the fixture (e.g. z0)')
        parser.add_argument('--curves', default=None,
                            help='Curve file, or "default" for the one named in the sidecar')
        parser.add_argument('--jacobian', action='store_true', help='Include dG, dH_L and the stacked rank')
        parser.add_argument('--published-order', action='store_true',
                            help='List edge values in the relabelled order stored with the fixture')

    def run(self, **options):
        bundle = self.load_bundle(options['triangulation'], options)
        t = bundle.triangulation
        inc = quad_incidence(t)
        z = self.load_shapes(options['shapes'], bundle)
        curves = self.load_curves(options, bundle)
        longitudes = [c for c in curves if c.role == 'longitude']
        order = bundle.published_edge_order if options['published_order'] else None

        positivity = positivity_check(z)
        data = {
            'name': bundle.name,
            'shapes': z.preferred_values,
            'positivity': positivity.to_dict(),
            'c': reorder_edges(list(complex_curvature(inc, z)), order),
        }
        if not positivity.positive:
            data['note'] = 'shapes are not positively oriented; G, H_L and volume need positive shapes'
            return data

        g = log_curvature(inc, z)
        data['G'] = reorder_edges(list(g), order)
        data['G_over_pi_i'] = reorder_edges([float(v.imag / np.pi) for v in g], order)
        data['angle_sum_defect'] = angle_sum_defect(t, g)
        data['gauss_bonnet'] = [check.to_dict() for check in
                                gauss_bonnet_from_log_curvature(t, g, options['tol'])]
        data['volume'] = volume(angles_from_shapes(z))
        if curves:
            data['H'] = {c.name: value for c, value in zip(curves, boundary_map(curves, z))}

        if options['jacobian']:
            jac_g = jacobian_G(inc, z)
            data['dG'] = jac_g[order] if order else jac_g
            if longitudes:
                jac_h = jacobian_H(longitudes, z)
                data['dH'] = jac_h
                weights = np.hstack([inc.matrix, curve_matrix(longitudes)])
                data['stacked_rank'] = rank_numeric(np.vstack([jac_g, jac_h]), options['rank_tol'],
                                                    scale=jacobian_term_scale(weights, z))
            data['rank_dG'] = rank_numeric(jac_g, options['rank_tol'], scale=jacobian_term_scale(inc.matrix, z))
        return data

    def headline(self, data):
        if 'G' not in data:
            return 'not positively oriented'
        return f"G/(pi i)={[round(v, 10) for v in data['G_over_pi_i']]} volume={data['volume']:.12g}"
