"""
Shared plumbing for the cone management commands: common flags, input
loading, human or JSON output and the exit-code contract.
"""
import dataclasses
import logging
from typing import Any, Dict, Optional

from django.core.management.base import BaseCommand, CommandError

from cone.accessors.fixture_accessors import TriangulationBundle, load_curves, load_shapes, load_triangulation
from cone.constants import QUADS_PER_TETRAHEDRON
from cone.exceptions import ConeDeformException
from cone.models.shape_model import ShapeAssignment
from cone.utils.report_builder import ReportBuilder
from cone.utils.validators import ConventionValidator, CountValidator, ToleranceValidator

logger = logging.getLogger(__name__)


class ConeCommand(BaseCommand):
    """Base class; subclasses implement ``add_command_arguments`` and ``run``."""

    command_name = ''

    def add_arguments(self, parser):
        self.add_command_arguments(parser)
        parser.add_argument('--json', action='store_true', dest='as_json',
                            help='Write a JSON report instead of human-readable lines')
        parser.add_argument('--tol', type=float, default=None,
                            help='Residual / identity tolerance override')
        parser.add_argument('--rank-tol', type=float, default=None,
                            help='Relative singular-value threshold for numerical rank')
        parser.add_argument('--seed', type=int, default=None,
                            help='Seed for randomized checks (default: CONE_DEFAULT_SEED)')
        parser.add_argument('--base-edge', default=None,
                            help='Preferred quad per tetrahedron, e.g. "12" or "01,12,01"')
        parser.add_argument('--reverse-orientation', action='store_true',
                            help="Use the cyclic order q -> q'' -> q' instead")

    def add_command_arguments(self, parser):
        pass

    def run(self, **options) -> Dict[str, Any]:
        raise NotImplementedError

    def failure(self, data: Dict[str, Any]) -> Optional[ConeDeformException]:
        """Exception to raise after the report has been written, if any."""
        return None

    def headline(self, data: Dict[str, Any]) -> Optional[str]:
        return None

    def handle(self, *args, **options):
        as_json = options['as_json']
        try:
            options['tol'] = ToleranceValidator.validate(options.get('tol'), 'tol')
            options['rank_tol'] = ToleranceValidator.validate(options.get('rank_tol'), 'rank_tol')
            data = self.run(**options)
        except ConeDeformException as exc:
            if as_json:
                self.stdout.write(ReportBuilder.dumps(ReportBuilder.error(exc, self.command_name)))
            raise CommandError(exc.message, returncode=exc.exit_code)

        failure = self.failure(data)
        if as_json:
            self.stdout.write(ReportBuilder.dumps(ReportBuilder.success(data, self.command_name, failure is None)))
        else:
            headline = self.headline(data)
            if headline:
                self.stdout.write(self.style.SUCCESS(headline))
            for line in ReportBuilder.human_lines(data):
                self.stdout.write(line)

        if failure is not None:
            raise CommandError(failure.message, returncode=failure.exit_code)

    # Input helpers

    def load_bundle(self, source: str, options: Dict[str, Any]) -> TriangulationBundle:
        bundle = self.source_bundle = load_triangulation(source)
        convention = ConventionValidator.parse_base_edges(
            options.get('base_edge'),
            bundle.triangulation.tet_count,
            fallback=bundle.convention,
            reverse=options.get('reverse_orientation', False),
        )
        if convention != bundle.convention:
            logger.info(f"Quad convention overridden to {convention.to_dict()}")
            bundle = dataclasses.replace(bundle, convention=convention)
        return bundle

    def load_curves(self, options: Dict[str, Any], bundle: TriangulationBundle, default: bool = False):
        source = options.get('curves')
        if source is None and default and bundle.metadata.get('curves'):
            source = 'default'
        # (tet, level) curve entries refer to the convention stored with the triangulation
        return load_curves(source, getattr(self, 'source_bundle', bundle))

    @staticmethod
    def count(value: int, field_name: str, minimum: int = 1) -> int:
        return CountValidator.validate(value, field_name, minimum)

    def load_shapes(self, source: str, bundle: TriangulationBundle) -> ShapeAssignment:
        """Shapes stored in the triangulation's own convention, re-expressed in ``bundle``'s.

        Quad values carry over when only the preferred quads change; with a
        reversed orientation the stored preferred values are read as given.
        """
        original = getattr(self, 'source_bundle', bundle)
        z = load_shapes(source, original)
        target = bundle.convention
        if target == original.convention or target.orientation != original.convention.orientation:
            return ShapeAssignment(z.preferred_values, target)
        quad_values = z.quad_values()
        return ShapeAssignment(quad_values[[QUADS_PER_TETRAHEDRON * tet + slot
                                            for tet, slot in enumerate(target.preferred)]], target)
