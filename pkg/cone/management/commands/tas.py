"""
Angle-structure report: a basis of the tangent space TAS, the leading-trailing
deformations of edges and curves, their spans and the pairing table.
"""
from cone.management.commands._base import ConeCommand
from cone.services.angle_structure_services import (
    edge_deformations,
    expected_tas_dimension,
    leading_trailing_curve,
    pairing,
    span_report,
    stas_basis,
    tas_basis,
)
from cone.services.gluing_services import quad_incidence
from cone.services.triangulation_services import vertex_classes


class Command(ConeCommand):
    help = 'Report TAS, the deformations Q_e and Q_curve, STAS and the curve pairings'
    command_name = 'tas'

    def add_command_arguments(self, parser):
        parser.add_argument('triangulation', help='Path to a .tri file or a fixture name')
        parser.add_argument('--curves', default=None,
                            help='Curve file, or "default" for the one named in the sidecar')
        parser.add_argument('--basis', action='store_true', help='Include basis vectors in the report')

    def run(self, **options):
        bundle = self.load_bundle(options['triangulation'], options)
        t, convention = bundle.triangulation, bundle.convention
        inc = quad_incidence(t)
        tas = tas_basis(inc)
        q_edges = edge_deformations(inc, convention)
        genus_sum = sum(v.genus for v in vertex_classes(t))

        data = {
            'name': bundle.name,
            'tas_dimension': len(tas),
            'tas_dimension_expected': expected_tas_dimension(t.tet_count, inc.edge_count,
                                                             len(vertex_classes(t))),
            'edge_deformations': span_report(q_edges, {'TAS': tas}).to_dict(),
            'edge_deformation_dimension_expected': t.tet_count - genus_sum,
        }
        if options['basis']:
            data['tas_basis'] = [w.tolist() for w in tas]
            data['edge_deformation_vectors'] = [q.tolist() for q in q_edges]

        curves = self.load_curves(options, bundle)
        if not curves:
            return data

        longitudes = [c for c in curves if c.role == 'longitude']
        stas = stas_basis(inc, [c.index_vector for c in longitudes])
        q_curves = {c.name: leading_trailing_curve(c.index_vector, convention) for c in curves}
        q_longitudes = [q_curves[c.name] for c in longitudes]
        data['stas_dimension'] = len(stas)
        data['edge_and_longitude_span'] = span_report(q_edges + q_longitudes, {'TAS': tas, 'STAS': stas}).to_dict()
        meridians = [c for c in curves if c.role == 'meridian']
        if meridians:
            data['meridian_span'] = span_report([q_curves[c.name] for c in meridians],
                                                {'STAS': stas, 'edges': q_edges}).to_dict()
        data['pairings'] = [
            {'curve': a.name, 'deformation': b.name, 'value': pairing(a.index_vector, q_curves[b.name])}
            for a in curves for b in curves
        ]
        if options['basis']:
            data['stas_basis'] = [w.tolist() for w in stas]
            data['curve_deformations'] = {name: q.tolist() for name, q in q_curves.items()}
        return data

    def headline(self, data):
        line = f"dimTAS={data['tas_dimension']} dim span(Q_e)={data['edge_deformations']['dimension']}"
        if 'stas_dimension' in data:
            line += f" dimSTAS={data['stas_dimension']}"
        return line
