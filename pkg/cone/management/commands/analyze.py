"""
Combinatorial report for a triangulation: counts, link genera, the dimension
lemma, the angle-structure dimension and the exact Neumann rank.
"""
from cone.management.commands._base import ConeCommand
from cone.services.angle_structure_services import expected_tas_dimension, tas_basis
from cone.services.gluing_services import neumann_matrix, quad_incidence
from cone.services.linear_algebra_services import rank_exact
from cone.services.triangulation_services import census_summary, edge_classes, is_connected, vertex_classes
from cone.utils.logging_config import PerformanceLogger


class Command(ConeCommand):
    help = 'Report |T|, |E|, |V|, link genera, dim TAS and rank of the Neumann matrix'
    command_name = 'analyze'

    def add_command_arguments(self, parser):
        parser.add_argument('triangulation', help='Path to a .tri file or a fixture name')

    def run(self, **options):
        bundle = self.load_bundle(options['triangulation'], options)
        t = bundle.triangulation
        with PerformanceLogger(f'analyze {bundle.name}'):
            summary = census_summary(t)
            inc = quad_incidence(t)
            tas_dimension = len(tas_basis(inc))
            rank = rank_exact(neumann_matrix(inc, bundle.convention).tolist())

        return {
            'name': bundle.name,
            'tet_count': summary.tet_count,
            'edge_count': summary.edge_count,
            'vertex_count': summary.vertex_count,
            'genera': sorted(summary.genera),
            'lemma_ok': summary.lemma_ok,
            'connected': is_connected(t),
            'tas_dimension': tas_dimension,
            'tas_dimension_expected': expected_tas_dimension(t.tet_count, summary.edge_count,
                                                             summary.vertex_count),
            'neumann_rank': rank,
            'tet_count_minus_genus_sum': t.tet_count - summary.genus_sum,
            'edges': [
                {'index': e.index, 'valence': e.valence, 'endpoints': list(e.endpoints)}
                for e in edge_classes(t)
            ],
            'vertices': [
                {'index': v.index, 'genus': v.genus, 'corners': len(v.members)}
                for v in vertex_classes(t)
            ],
        }

    def headline(self, data):
        genera = ','.join(str(g) for g in data['genera'])
        return (f"|T|={data['tet_count']} |E|={data['edge_count']} |V|={data['vertex_count']} "
                f"genera=[{genera}] rank(B)={data['neumann_rank']} dimTAS={data['tas_dimension']}")
