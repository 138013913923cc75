"""
Invariant suite behind `verify`: combinatorial identities, exact ranks and
dimensions, angle-structure memberships, pairings and numeric Jacobian checks
at sampled shapes.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from django.conf import settings
from joblib import Parallel, delayed
from sympy import lambdify, symbols, sympify
from sympy.polys.domains import QQ_I

from cone.exceptions import PoleError
from cone.models.curve_model import CurveSpec
from cone.models.shape_model import QuadConvention, ShapeAssignment
from cone.models.triangulation_model import Triangulation
from cone.services.angle_structure_services import (
    edge_deformations,
    expected_tas_dimension,
    is_in_tas,
    leading_trailing_curve,
    pairing,
    span_report,
    stas_basis,
    tas_basis,
)
from cone.services.geometry_services import hessian_quadratic_form, shapes_from_angles
from cone.services.gluing_services import (
    angle_sum_defect,
    complex_curvature,
    curvature_fiber_lifts,
    curvature_monomials,
    finite_difference_jacobian,
    gauss_bonnet_check,
    incidence_row_sums_ok,
    jacobian_G,
    jacobian_term_scale,
    log_curvature,
    monomial_of_vector,
    neumann_matrix,
    quad_incidence,
    reorder_edges,
)
from cone.services.linear_algebra_services import rank_exact, rank_numeric
from cone.services.parametrization_services import (
    eval_exact,
    eval_phi0,
    parse_gaussian,
    positivity_grid,
    region_samples,
    region_topology,
    verify_on_variety,
)
from cone.services.peripheral_services import (
    boundary_map,
    curve_matrix,
    curve_around_edge_endpoint,
    index_vector,
    intersection_number,
    jacobian_H,
)
from cone.services.random_services import (
    random_angle_point,
    random_closed_curve,
    random_shapes,
    random_triangulation,
)
from cone.services.triangulation_services import census_summary, edge_classes, vertex_classes
from cone.utils.logging_config import PerformanceLogger
from cone.utils.report_builder import format_vector

logger = logging.getLogger(__name__)

FD_RELATIVE_TOLERANCE = 1e-6
EXP_TOLERANCE = 1e-10


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ''
    skipped: bool = False

    def to_dict(self) -> dict:
        return {'name': self.name, 'passed': self.passed, 'skipped': self.skipped, 'detail': self.detail}


@dataclass
class VerificationReport:
    label: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.skipped)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed and not c.skipped]

    def add(self, name: str, passed: bool, detail: str = ''):
        self.checks.append(CheckResult(name=name, passed=bool(passed), detail=detail))

    def skip(self, name: str, reason: str):
        self.checks.append(CheckResult(name=name, passed=True, detail=reason, skipped=True))

    def run(self, name: str, check: Callable[[], tuple]):
        """Run a check returning (passed, detail); exceptions count as failures."""
        try:
            passed, detail = check()
        except Exception as exc:
            logger.error(f"Check {name} raised {exc.__class__.__name__}: {exc}")
            passed, detail = False, f'{exc.__class__.__name__}: {exc}'
        self.add(name, passed, detail)

    def to_dict(self) -> dict:
        return {
            'label': self.label,
            'passed': self.passed,
            'checks': [c.to_dict() for c in self.checks],
        }


def _relative_error(actual: np.ndarray, expected: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(expected))))
    return float(np.max(np.abs(actual - expected))) / scale


def verify_triangulation(t: Triangulation, convention: Optional[QuadConvention] = None,
                         curves: Sequence[CurveSpec] = (), samples: int = None, seed: int = None,
                         label: str = 'triangulation', curve_pairs: int = 5) -> VerificationReport:
    """Run the full invariant suite on one triangulation."""
    samples = settings.CONE_VERIFY_SAMPLES if samples is None else samples
    seed = settings.CONE_DEFAULT_SEED if seed is None else seed
    convention = convention or QuadConvention.default(t.tet_count)
    rng = np.random.default_rng(seed)
    report = VerificationReport(label=label)

    summary = census_summary(t)
    edges = edge_classes(t)
    vertices = vertex_classes(t)
    inc = quad_incidence(t)
    genus_sum = summary.genus_sum
    expected_rank = t.tet_count - genus_sum

    report.add('euler_count', summary.lemma_ok,
               f'|T|={summary.tet_count} |E|={summary.edge_count} |V|={summary.vertex_count} '
               f'genera={sorted(summary.genera)}')
    report.add('edge_partition', sum(e.valence for e in edges) == 6 * t.tet_count)
    report.add('vertex_partition', sum(len(v.members) for v in vertices) == 4 * t.tet_count)
    report.add('incidence_row_sums', incidence_row_sums_ok(inc))

    neumann_rank = rank_exact(neumann_matrix(inc, convention).tolist())
    report.add('neumann_rank', neumann_rank == expected_rank, f'rank={neumann_rank} expected={expected_rank}')

    tas = tas_basis(inc)
    expected_tas = expected_tas_dimension(t.tet_count, len(edges), len(vertices))
    report.add('tas_dimension', len(tas) == expected_tas, f'dim={len(tas)} expected={expected_tas}')
    report.add('tas_basis_membership', all(is_in_tas(inc, w) for w in tas))

    q_edges = edge_deformations(inc, convention)
    report.add('edge_deformations_in_tas', all(is_in_tas(inc, q) for q in q_edges))
    q_edge_span = span_report(q_edges)
    report.add('edge_deformation_span', q_edge_span.dimension == expected_rank,
               f'dim={q_edge_span.dimension} expected={expected_rank}')

    def edge_loops():
        for edge in edges:
            for endpoint in (0, 1):
                path = curve_around_edge_endpoint(t, edge, endpoint, link_orientation=convention.orientation)
                if not np.array_equal(index_vector(t, path, convention.orientation), inc.column(edge.index)):
                    return False, f'edge {edge.index} endpoint {endpoint}'
                reverse = index_vector(t, path.reversed(), convention.orientation)
                if not np.array_equal(reverse, -inc.column(edge.index)):
                    return False, f'edge {edge.index} endpoint {endpoint} reversed'
        return True, f'{2 * len(edges)} loops'
    report.run('edge_loop_index', edge_loops)

    def pairings_with_random_curves():
        count = 0
        for _ in range(curve_pairs):
            first = random_closed_curve(t, rng)
            second = random_closed_curve(t, rng, vertex_class=first.vertex_class)
            ind_a = index_vector(t, first, convention.orientation)
            ind_b = index_vector(t, second, convention.orientation)
            if any(pairing(ind_a, q) != 0 for q in q_edges):
                return False, 'closed curve pairs nontrivially with an edge deformation'
            if not is_in_tas(inc, leading_trailing_curve(ind_b, convention)):
                return False, 'curve deformation outside TAS'
            iota = intersection_number(t, first, second, convention.orientation)
            if pairing(ind_a, leading_trailing_curve(ind_b, convention)) != 2 * iota:
                return False, f'pairing != 2 * intersection ({iota})'
            if pairing(ind_a, leading_trailing_curve(ind_b, convention)) != \
                    -pairing(ind_b, leading_trailing_curve(ind_a, convention)):
                return False, 'pairing is not antisymmetric'
            count += 1
        return True, f'{count} curve pairs'
    report.run('curve_pairing', pairings_with_random_curves)

    if curves:
        _verify_curve_system(report, t, inc, convention, curves, q_edges)
    else:
        report.skip('curve_system', 'no curves given')

    longitude_curves = [c for c in curves if c.role == 'longitude']
    if longitude_curves:
        stacked_weights = np.hstack([inc.matrix, curve_matrix(longitude_curves)])
    numeric = {'rank_dG': 0, 'rank_stacked': 0, 'gauss_bonnet': 0, 'exp_G': 0, 'angle_sum': 0,
               'jacobian_fd': 0, 'hessian': 0}
    failures = {}
    for k in range(samples):
        x = random_angle_point(t.tet_count, rng)
        z = shapes_from_angles(x, convention)
        g = log_curvature(inc, z)
        jac = jacobian_G(inc, z)

        checks = {
            'rank_dG': lambda: rank_numeric(jac, scale=jacobian_term_scale(inc.matrix, z)) == expected_rank,
            'gauss_bonnet': lambda: all(c.ok for c in gauss_bonnet_check(t, inc, z)),
            'exp_G': lambda: np.max(np.abs(np.exp(g) - complex_curvature(inc, z))) <= EXP_TOLERANCE
            and abs(np.prod(complex_curvature(inc, z)) - 1.0) <= EXP_TOLERANCE,
            'angle_sum': lambda: angle_sum_defect(t, g) <= settings.CONE_IDENTITY_TOLERANCE,
            'hessian': lambda: all(hessian_quadratic_form(x, w) < 0 for w in tas),
        }
        if longitude_curves:
            checks['rank_stacked'] = lambda: rank_numeric(
                np.vstack([jac, jacobian_H(longitude_curves, z)]),
                scale=jacobian_term_scale(stacked_weights, z)) == t.tet_count
        if k < 20:
            def fd():
                fd_g = finite_difference_jacobian(lambda s: log_curvature(inc, s), z)
                ok = _relative_error(jac, fd_g) <= FD_RELATIVE_TOLERANCE
                if longitude_curves:
                    fd_h = finite_difference_jacobian(lambda s: boundary_map(longitude_curves, s), z)
                    ok = ok and _relative_error(jacobian_H(longitude_curves, z), fd_h) <= FD_RELATIVE_TOLERANCE
                return ok
            checks['jacobian_fd'] = fd

        for name, check in checks.items():
            if check():
                numeric[name] += 1
            else:
                failures.setdefault(name, k)

    for name, passed in numeric.items():
        if name == 'rank_stacked' and not longitude_curves:
            report.skip(name, 'no longitudes given')
            continue
        expected = min(samples, 20) if name == 'jacobian_fd' else samples
        detail = f'{passed}/{expected} samples'
        if name in failures:
            detail += f', first failure at sample {failures[name]}'
        report.add(name, passed == expected, detail)

    logger.info(f"Verification of {label}: {len(report.failures)} failure(s) in {len(report.checks)} checks")
    return report


def _verify_curve_system(report: VerificationReport, t: Triangulation, inc, convention: QuadConvention,
                         curves: Sequence[CurveSpec], q_edges: List[np.ndarray]):
    longitude_curves = [c for c in curves if c.role == 'longitude']
    meridian_curves = [c for c in curves if c.role == 'meridian']
    genus_sum = sum(v.genus for v in vertex_classes(t))
    q_long = [leading_trailing_curve(c.index_vector, convention) for c in longitude_curves]
    q_mer = [leading_trailing_curve(c.index_vector, convention) for c in meridian_curves]

    report.add('longitude_count', len(longitude_curves) == genus_sum,
               f'{len(longitude_curves)} longitudes, genus sum {genus_sum}')
    report.add('curve_deformations_in_tas', all(is_in_tas(inc, q) for q in q_long + q_mer))

    stas = stas_basis(inc, [c.index_vector for c in longitude_curves])
    report.add('stas_dimension', len(stas) == t.tet_count, f'dim={len(stas)} expected={t.tet_count}')
    combined = span_report(q_edges + q_long, {'STAS': stas})
    report.add('edge_and_longitude_span_is_stas', combined.equals['STAS'] and combined.dimension == t.tet_count,
               f'dim={combined.dimension}')

    report.add('longitude_pairings', all(
        pairing(a.index_vector, q) == 0 for a in longitude_curves for q in q_long))

    if meridian_curves:
        by_name = {c.name: k for k, c in enumerate(longitude_curves)}
        ok = True
        for meridian in meridian_curves:
            for k in range(len(longitude_curves)):
                value = pairing(meridian.index_vector, q_long[k])
                dual = meridian.dual is not None and by_name.get(meridian.dual) == k
                if (dual and abs(value) != 2) or (not dual and value != 0):
                    ok = False
        report.add('meridian_pairings', ok)
        independence = span_report(q_long + q_mer, {'edges': q_edges, 'STAS': stas})
        report.add('meridian_independence', independence.independent
                   and independence.trivial_intersection['edges'], f'dim={independence.dimension}')
        meridian_span = span_report(q_mer, {'STAS': stas})
        report.add('meridians_outside_stas', meridian_span.trivial_intersection['STAS'])
    else:
        report.skip('meridian_pairings', 'no meridians given')


def _verify_random_instance(index: int, seed: int, samples: int, max_tetrahedra: int) -> VerificationReport:
    rng = np.random.default_rng([seed, index])
    tet_count = int(rng.integers(1, max_tetrahedra + 1))
    t = random_triangulation(tet_count, rng)
    return verify_triangulation(t, samples=samples, seed=int(rng.integers(2 ** 31)),
                                label=f'random[{index}] |T|={tet_count}', curve_pairs=5)


def verify_random(count: int, seed: int = None, samples: int = 5, max_tetrahedra: int = None,
                  n_jobs: int = None) -> List[VerificationReport]:
    """Universal checks on ``count`` random triangulations; each instance is seeded by (seed, index)."""
    seed = settings.CONE_DEFAULT_SEED if seed is None else seed
    max_tetrahedra = settings.CONE_RANDOM_MAX_TETRAHEDRA if max_tetrahedra is None else max_tetrahedra
    n_jobs = settings.CONE_VERIFY_JOBS if n_jobs is None else n_jobs
    with PerformanceLogger(f'verify {count} random triangulations', logger):
        return Parallel(n_jobs=n_jobs, prefer='threads')(
            delayed(_verify_random_instance)(index, seed, samples, max_tetrahedra) for index in range(count)
        )


# Fixture replay

def replay_table1(bundle, param, samples: int = 20, seed: int = None) -> VerificationReport:
    """Counts of the seven-tetrahedron example, its complete shapes and the phi0 family over it."""
    seed = settings.CONE_DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    t, convention = bundle.triangulation, bundle.convention
    inc = quad_incidence(t)
    report = VerificationReport(label=bundle.name)

    summary = census_summary(t)
    report.add('counts', (summary.tet_count, summary.edge_count, summary.vertex_count, summary.genera)
               == (7, 7, 1, (1,)), str(summary.to_dict()))
    rank = rank_exact(neumann_matrix(inc, convention).tolist())
    report.add('neumann_rank', rank == 6, f'rank={rank}')

    complete = bundle.metadata.get('complete_shapes')
    if complete:
        def complete_structure():
            z = ShapeAssignment(_shape_values(bundle.metadata['shapes'][complete], t.tet_count), convention)
            c_error = float(np.max(np.abs(complex_curvature(inc, z) - 1.0)))
            g_error = float(np.max(np.abs(log_curvature(inc, z) - 2j * np.pi)))
            return c_error <= 1e-10 and g_error <= 1e-9, f'|c - 1|={c_error:.2e} |G - 2 pi i|={g_error:.2e}'
        report.run('complete_shapes', complete_structure)

    exact = bundle.metadata.get('exact_shapes', {}).get(complete)
    point = bundle.metadata.get('parametrization_point')
    if exact and point:
        def exact_value():
            values = eval_exact(param, point)
            expected = [parse_gaussian(v) for v in exact]
            return values == expected, f'{param.name}({point}) = ' + ', '.join(str(QQ_I.to_sympy(v)) for v in values)
        report.run('phi0_exact_value', exact_value)

    def conjugate_symmetry():
        checked = 0
        while checked < samples:
            u = complex(rng.uniform(-1.0, 2.0), rng.uniform(-1.0, 2.0))
            try:
                direct = eval_phi0(param, u)
                mirrored = np.conj(eval_phi0(param, np.conj(u), conjugate=True))
            except PoleError:
                continue
            if _relative_error(direct, mirrored) > 1e-12:
                return False, f'mismatch at u={u}'
            checked += 1
        return True, f'{checked} points'
    report.run('phi0_conjugate_symmetry', conjugate_symmetry)

    mask = positivity_grid(param)
    topology = region_topology(mask)
    report.add('phi0_region_topology', topology.cells > 0 and topology.simply_connected, str(topology.to_dict()))

    def on_variety():
        records = verify_on_variety(param, inc, convention, region_samples(mask, samples, rng))
        positive = [r for r in records if r.get('positive')]
        bad = [r['u'] for r in positive if not r['ok']]
        return len(positive) >= min(samples, topology.cells) and not bad, \
            f'{len(positive)} positive samples, failures at {bad}' if bad else f'{len(positive)} positive samples'
    report.run('phi0_on_variety', on_variety)
    return report


def replay_table2(bundle, curves: Sequence[CurveSpec], samples: int = 3, seed: int = None) -> VerificationReport:
    """Displayed gluing data of the five-tetrahedron example against the stored fixture values.

    Displayed Jacobians and the minor determinant are formulas in the preferred
    parameters, compared at z0, z1 and ``samples`` random positive shapes.
    """
    seed = settings.CONE_DEFAULT_SEED if seed is None else seed
    t, convention = bundle.triangulation, bundle.convention
    inc = quad_incidence(t)
    order = bundle.published_edge_order
    metadata = bundle.metadata
    report = VerificationReport(label=bundle.name)

    summary = census_summary(t)
    report.add('counts', (summary.tet_count, summary.edge_count, summary.vertex_count,
                          tuple(sorted(summary.genera))) == (5, 4, 2, (1, 2)), str(summary.to_dict()))
    rank = rank_exact(neumann_matrix(inc, convention).tolist())
    report.add('neumann_rank', rank == 2, f'rank={rank}')

    monomials = curvature_monomials(inc, convention, order)
    report.add('curvature_monomials', monomials == metadata['curvature_monomials'], '; '.join(monomials))
    longitude_curves = [c for c in curves if c.role == 'longitude']
    holonomy_strings = [monomial_of_vector(c.index_vector, convention) for c in longitude_curves]
    report.add('holonomy_monomials', holonomy_strings == metadata['holonomy_monomials'],
               '; '.join(holonomy_strings))

    shapes = {name: ShapeAssignment(_shape_values(values, t.tet_count), convention)
              for name, values in metadata['shapes'].items()}
    targets = {name: _complex_pairs(values) for name, values in metadata['log_curvatures'].items()}
    for name, u in targets.items():
        z_name = 'z' + name[1:]
        if z_name not in shapes:
            continue
        report.run(f'log_curvature_{z_name}', lambda z=shapes[z_name], u=u: (
            float(np.max(np.abs(log_curvature(inc, z) - u))) <= 1e-10,
            format_vector(reorder_edges(list(log_curvature(inc, z)), order))))

    if {'z0', 'z1'} <= set(shapes):
        def same_curvature():
            c0, c1 = complex_curvature(inc, shapes['z0']), complex_curvature(inc, shapes['z1'])
            g0, g1 = log_curvature(inc, shapes['z0']), log_curvature(inc, shapes['z1'])
            distinct = float(np.max(np.abs(g0 - g1))) > 1.0
            return float(np.max(np.abs(c0 - c1))) <= 1e-10 and distinct, 'c(z0) = c(z1), G(z0) != G(z1)'
        report.run('curvature_fiber', same_curvature)

    if {'u0', 'u1'} <= set(targets) and 'z0' in shapes:
        def fiber_lifts():
            lifts = curvature_fiber_lifts(t, inc, complex_curvature(inc, shapes['z0']))
            found = [name for name in ('u0', 'u1')
                     if any(float(np.max(np.abs(lift - targets[name]))) <= 1e-8 for lift in lifts)]
            return found == ['u0', 'u1'], f"{len(lifts)} lift(s), containing {', '.join(found) or 'neither'}"
        report.run('curvature_fiber_lifts', fiber_lifts)

    rng = np.random.default_rng(seed)
    points = [z for name, z in shapes.items() if name in ('z0', 'z1')]
    points += [random_shapes(convention, rng) for _ in range(samples)]
    displayed = metadata.get('displayed_jacobians', {})
    jacobians = {'dG': lambda z: jacobian_G(inc, z)[order] if order else jacobian_G(inc, z),
                 'dH': lambda z: jacobian_H(longitude_curves, z)}
    for key, computed in jacobians.items():
        if key not in displayed or (key == 'dH' and not longitude_curves):
            continue
        report.run(f'jacobian_{key}', lambda entries=displayed[key], computed=computed: _matches_at(
            points, _formula_matrix(entries, t.tet_count), computed))

    minor = metadata.get('minor_determinant')
    if minor and longitude_curves:
        rows = minor['edge_rows']

        def minor_determinant(z):
            jac = jacobian_G(inc, z)[order] if order else jacobian_G(inc, z)
            return np.array([[np.linalg.det(np.vstack([jac[rows], jacobian_H(longitude_curves, z)]))]])
        report.run('minor_determinant', lambda: _matches_at(
            points, _formula_matrix([[minor['value']]], t.tet_count), minor_determinant, tol=1e-9))

    holonomies = metadata.get('holonomies', {})
    if 't0' in holonomies and 'z0' in shapes and longitude_curves:
        expected = _complex_pairs(holonomies['t0'])
        report.run('holonomy_z0', lambda: (
            float(np.max(np.abs(boundary_map(longitude_curves, shapes['z0']) - expected))) <= 1e-10,
            format_vector(boundary_map(longitude_curves, shapes['z0']))))
    return report


def _formula_matrix(entries: Sequence[Sequence[str]], tet_count: int) -> Callable[[ShapeAssignment], np.ndarray]:
    """Evaluator for a matrix of formulas in the preferred parameters z0, z1, ..."""
    names = symbols(f'z0:{tet_count}')
    compiled = [[lambdify(names, sympify(entry)) for entry in row] for row in entries]
    return lambda z: np.array([[complex(f(*z.preferred_values)) for f in row] for row in compiled])


def _matches_at(points: Sequence[ShapeAssignment], formula: Callable, computed: Callable,
                tol: float = EXP_TOLERANCE) -> tuple:
    worst = max(_relative_error(computed(z), formula(z)) for z in points)
    return worst <= tol, f'{len(points)} points, max relative error {worst:.2e}'


def _shape_values(values: dict, tet_count: int) -> np.ndarray:
    return np.asarray([complex(*values[str(k)]) for k in range(tet_count)])


def _complex_pairs(values) -> np.ndarray:
    return np.asarray([complex(*v) for v in values])
