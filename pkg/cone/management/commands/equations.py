"""
Print the gluing system of a triangulation: the monomials of c(z) per edge
class, the quad incidence and Neumann matrices, and the holonomy monomials of
a curve system.
"""
from cone.constants import SLOT_LABELS
from cone.management.commands._base import ConeCommand
from cone.services.gluing_services import (
    curvature_monomials,
    monomial_of_vector,
    neumann_matrix,
    quad_incidence,
)
from cone.services.linear_algebra_services import rank_exact
from cone.services.triangulation_services import edge_classes


class Command(ConeCommand):
    help = 'Print c(z) and e^{H_L} as monomials and the incidence / Neumann matrices'
    command_name = 'equations'

    def add_command_arguments(self, parser):
        parser.add_argument('triangulation', help='Path to a .tri file or a fixture name')
        parser.add_argument('--curves', default=None,
                            help='Curve file, or "default" for the one named in the sidecar')
        parser.add_argument('--published-order', action='store_true',
                            help='List edges in the relabelled order stored with the fixture')
        parser.add_argument('--matrices', action='store_true',
                            help='Include the incidence and Neumann matrices')

    def run(self, **options):
        bundle = self.load_bundle(options['triangulation'], options)
        t, convention = bundle.triangulation, bundle.convention
        inc = quad_incidence(t)
        order = bundle.published_edge_order if options['published_order'] else None
        if order is None:
            order = list(range(inc.edge_count))

        edges = edge_classes(t)
        monomials = curvature_monomials(inc, convention, order)
        data = {
            'name': bundle.name,
            'convention': convention.to_dict(),
            'edge_order': order,
            'curvature': [
                {'edge': e, 'valence': edges[e].valence, 'monomial': monomial}
                for e, monomial in zip(order, monomials)
            ],
        }

        curves = self.load_curves(options, bundle)
        if curves:
            data['holonomy'] = [
                {'curve': c.name, 'role': c.role, 'monomial': monomial_of_vector(c.index_vector, convention)}
                for c in curves
            ]

        if options['matrices']:
            neumann = neumann_matrix(inc, convention)
            data['quads'] = [f'{tet}:{SLOT_LABELS[slot]}' for tet in range(t.tet_count) for slot in range(3)]
            data['incidence'] = inc.matrix[:, order].tolist()
            data['neumann'] = neumann.tolist()
            data['neumann_rank'] = rank_exact(neumann.tolist())
        return data
