"""
Input validation utilities for command-line flags and data files.
"""
from typing import Optional, Sequence

from cone.constants import EDGE_LABELS, QUAD_SLOT_OF_EDGE
from cone.exceptions import ValidationError
from cone.models.shape_model import QuadConvention


class ConventionValidator:
    """Quad-convention parsing for --base-edge style overrides."""

    @staticmethod
    def parse_quad(item: str, field_name: str = "base_edge") -> int:
        item = str(item).strip()
        if item in ('0', '1', '2'):
            return int(item)
        if item in EDGE_LABELS:
            return QUAD_SLOT_OF_EDGE[(int(item[0]), int(item[1]))]
        if len(item) == 2 and item[::-1] in EDGE_LABELS:
            return QUAD_SLOT_OF_EDGE[(int(item[1]), int(item[0]))]
        raise ValidationError(
            f"Invalid quad '{item}' for {field_name}. Use an edge label such as 01 or 12, or a slot 0-2",
            field=field_name,
        )

    @staticmethod
    def parse_base_edges(value: Optional[str], tet_count: int,
                         fallback: Optional[QuadConvention] = None, reverse: bool = False) -> QuadConvention:
        """"12" applies to every tetrahedron; "01,12,01" lists one quad per tetrahedron."""
        base = fallback or QuadConvention.default(tet_count)
        orientation = -base.orientation if reverse else base.orientation
        if not value:
            return QuadConvention(preferred=base.preferred, orientation=orientation)

        items = [part for part in str(value).replace(' ', '').split(',') if part]
        if len(items) == 1:
            items = items * tet_count
        if len(items) != tet_count:
            raise ValidationError(
                f"--base-edge lists {len(items)} quads for {tet_count} tetrahedra",
                field="base_edge",
            )
        preferred = tuple(ConventionValidator.parse_quad(item) for item in items)
        return QuadConvention(preferred=preferred, orientation=orientation)

    @staticmethod
    def from_slots(slots: Sequence[int], orientation: int = 1) -> QuadConvention:
        if any(s not in (0, 1, 2) for s in slots):
            raise ValidationError("Quad slots must be 0, 1 or 2", field="preferred")
        if orientation not in (1, -1):
            raise ValidationError("Orientation must be 1 or -1", field="orientation")
        return QuadConvention(preferred=tuple(slots), orientation=orientation)


class ToleranceValidator:
    """Positive tolerance values."""

    @staticmethod
    def validate(value: Optional[float], field_name: str = "tol", upper: float = 1.0) -> Optional[float]:
        if value is None:
            return None
        if not 0.0 < float(value) < upper:
            raise ValidationError(f"{field_name} must lie in (0, {upper})", field=field_name)
        return float(value)


class CountValidator:

    @staticmethod
    def validate(value: int, field_name: str = "count", minimum: int = 1) -> int:
        if value is None or int(value) < minimum:
            raise ValidationError(f"{field_name} must be at least {minimum}", field=field_name)
        return int(value)
