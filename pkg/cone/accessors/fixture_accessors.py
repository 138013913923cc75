"""
File access for triangulations, shapes, curves, targets and the shipped fixtures.

A ``.tri`` file may have a sidecar ``.json`` with the same stem carrying its
quad convention and named data; fixture names ("table1", "table2", "phi0")
resolve to the copies under ``cone/data``.
"""
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from cone.constants import FIXTURE_NAMES
from cone.exceptions import ValidationError
from cone.models.curve_model import ArcPath, CurveSpec, Step
from cone.models.parametrization_model import RationalParam
from cone.models.shape_model import QuadConvention, ShapeAssignment
from cone.models.solver_model import SolveTarget
from cone.models.triangulation_model import Triangulation
from cone.serializers.curve_serializers import CurveFileSerializer
from cone.serializers.field_serializers import ComplexField, ConventionSerializer
from cone.serializers.shape_serializers import ShapeFileSerializer, TargetSerializer
from cone.services.parametrization_services import rational_param_from_dict
from cone.services.peripheral_services import index_vector, index_vector_from_entries
from cone.services.triangulation_services import parse_triangulation

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent / 'data'


@dataclass(frozen=True, eq=False)
class TriangulationBundle:
    """A parsed triangulation with its quad convention and sidecar metadata."""
    name: str
    path: Path
    triangulation: Triangulation
    convention: QuadConvention
    metadata: Dict = field(default_factory=dict)

    @property
    def published_edge_order(self) -> Optional[List[int]]:
        return self.metadata.get('published_edge_order')


def _serializer_errors(serializer) -> str:
    return json.dumps(serializer.errors, default=str)


def read_json(path: Union[str, Path]) -> Union[dict, list]:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise ValidationError(f"File not found: {path}", field=str(path))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"Invalid JSON in {path}: {exc}", field=str(path))


def resolve_path(name_or_path: Union[str, Path], suffix: str) -> Path:
    """Existing path as given, else the shipped fixture with that stem."""
    path = Path(name_or_path)
    if path.exists():
        return path
    candidate = DATA_DIR / f'{path.stem}{suffix}'
    if candidate.exists():
        return candidate
    raise ValidationError(f"File not found: {name_or_path}", field=str(name_or_path))


def convention_from_dict(data: Optional[dict], tet_count: int) -> QuadConvention:
    if not data:
        return QuadConvention.default(tet_count)
    serializer = ConventionSerializer(data=data)
    if not serializer.is_valid():
        raise ValidationError(f"Invalid quad convention: {_serializer_errors(serializer)}", field='convention')
    preferred = serializer.validated_data['preferred']
    if len(preferred) != tet_count:
        raise ValidationError(f"Convention lists {len(preferred)} quads for {tet_count} tetrahedra",
                              field='convention')
    return QuadConvention(preferred=tuple(preferred), orientation=serializer.validated_data['orientation'])


def load_triangulation(name_or_path: Union[str, Path]) -> TriangulationBundle:
    path = resolve_path(name_or_path, '.tri')
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"Cannot read {path}: {exc}", field=str(path))
    triangulation = parse_triangulation(text)

    sidecar = path.with_suffix('.json')
    metadata = read_json(sidecar) if sidecar.exists() else {}
    convention = convention_from_dict(metadata.get('convention'), triangulation.tet_count)
    logger.info(f"Loaded {path.name} with {triangulation.tet_count} tetrahedra")
    return TriangulationBundle(name=path.stem, path=path, triangulation=triangulation,
                               convention=convention, metadata=metadata)


@lru_cache(maxsize=8)
def load_fixture(name: str) -> TriangulationBundle:
    if name not in FIXTURE_NAMES or name == 'phi0':
        raise ValidationError(f"Unknown triangulation fixture '{name}'", field='fixture')
    return load_triangulation(DATA_DIR / f'{name}.tri')


def shapes_from_dict(data: dict, convention: QuadConvention) -> ShapeAssignment:
    payload = data if 'shapes' in data else {'shapes': data}
    serializer = ShapeFileSerializer(data=payload)
    if not serializer.is_valid():
        raise ValidationError(f"Invalid shape file: {_serializer_errors(serializer)}", field='shapes')
    values = serializer.validated_data['shapes']
    if len(values) != convention.tet_count:
        raise ValidationError(f"Shape file has {len(values)} entries for {convention.tet_count} tetrahedra",
                              field='shapes')
    return ShapeAssignment(np.asarray(values, dtype=complex), convention)


def load_shapes(source: Union[str, Path], bundle: TriangulationBundle) -> ShapeAssignment:
    """Shapes from a JSON file, or a shape set named in the triangulation's sidecar."""
    named = bundle.metadata.get('shapes', {})
    if str(source) in named:
        return shapes_from_dict(named[str(source)], bundle.convention)
    return shapes_from_dict(read_json(source), bundle.convention)


def target_from_dict(data: dict) -> SolveTarget:
    serializer = TargetSerializer(data=data)
    if not serializer.is_valid():
        raise ValidationError(f"Invalid target file: {_serializer_errors(serializer)}", field='target')
    return SolveTarget(u=serializer.validated_data['u'], t=serializer.validated_data['t'])


def load_target(source: Union[str, Path], bundle: TriangulationBundle) -> SolveTarget:
    """Target from a JSON file, or "u0+t0" style names from the sidecar."""
    text = str(source)
    u_names = bundle.metadata.get('log_curvatures', {})
    t_names = bundle.metadata.get('holonomies', {})
    if '+' in text and not Path(text).exists():
        u_name, t_name = text.split('+', 1)
        if u_name in u_names and t_name in t_names:
            return target_from_dict({'u': u_names[u_name], 't': t_names[t_name]})
    if text in u_names:
        return target_from_dict({'u': u_names[text], 't': []})
    return target_from_dict(read_json(source))


def complex_list(values) -> np.ndarray:
    field_ = ComplexField()
    return np.asarray([field_.to_internal_value(v) for v in values], dtype=complex)


def curves_from_dict(data: dict, t: Triangulation, convention: QuadConvention) -> List[CurveSpec]:
    serializer = CurveFileSerializer(data=data)
    if not serializer.is_valid():
        raise ValidationError(f"Invalid curve file: {_serializer_errors(serializer)}", field='curves')

    curves = []
    for entry in serializer.validated_data['curves']:
        if serializer.validated_data['format'] == 'arcpath':
            path = ArcPath(vertex_class=entry['vertex_class'],
                           steps=tuple(Step(*step) for step in entry['steps']))
            vector = index_vector(t, path, convention.orientation)
        else:
            path = None
            vector = index_vector_from_entries([tuple(e) for e in entry['entries']], convention)
        curves.append(CurveSpec(
            name=entry['name'],
            index_vector=vector,
            role=entry['role'],
            path=path,
            vertex_class=entry.get('vertex_class'),
            dual=entry.get('dual'),
        ))
    return curves


def load_curves(source: Optional[Union[str, Path]], bundle: TriangulationBundle) -> List[CurveSpec]:
    """Curves from a JSON file; "default" picks the file named in the sidecar."""
    if source is None:
        return []
    if str(source) == 'default':
        named = bundle.metadata.get('curves')
        if not named:
            raise ValidationError(f"{bundle.name} declares no default curve file", field='curves')
        source = bundle.path.parent / named
    path = resolve_path(source, '.json')
    return curves_from_dict(read_json(path), bundle.triangulation, bundle.convention)


def longitudes(curves: List[CurveSpec]) -> List[CurveSpec]:
    return [c for c in curves if c.role == 'longitude']


def meridians(curves: List[CurveSpec]) -> List[CurveSpec]:
    return [c for c in curves if c.role == 'meridian']


@lru_cache(maxsize=4)
def load_parametrization(name: str = 'phi0') -> RationalParam:
    return rational_param_from_dict(read_json(resolve_path(name, '.json')))
