"""
Report builder for consistent command output.

JSON output uses Python's shortest round-trip float repr, so every double
is reproduced exactly on reading; human output rounds to a fixed number of
significant digits. Reports carry no timestamps, so equal inputs give
byte-identical output.
"""
import json
import math
from typing import Any, Dict, List, Sequence

import numpy as np
from django.conf import settings

from cone.exceptions import ConeDeformException


def to_jsonable(value: Any) -> Any:
    """Convert numpy arrays, complex numbers and nested containers to JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict())
    return value


def format_number(value: Any, digits: int = None) -> str:
    digits = settings.CONE_HUMAN_DIGITS if digits is None else digits
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        if value.imag == 0:
            return f'{value.real:.{digits}g}'
        if value.real == 0:
            return f'{value.imag:.{digits}g}i'
        sign = '+' if value.imag >= 0 else '-'
        return f'{value.real:.{digits}g}{sign}{abs(value.imag):.{digits}g}i'
    if isinstance(value, (float, np.floating)):
        return f'{float(value):.{digits}g}'
    return str(value)


def format_vector(values: Sequence, digits: int = None) -> str:
    return '[' + ', '.join(format_number(v, digits) for v in values) + ']'


class ReportBuilder:
    """Centralized builder for command reports."""

    @staticmethod
    def success(data: Dict[str, Any], command: str, passed: bool = True) -> Dict[str, Any]:
        """Completed run; ``passed`` is False when the command still exits non-zero on its result."""
        return {'command': command, 'success': passed, 'data': to_jsonable(data)}

    @staticmethod
    def error(exc: ConeDeformException, command: str) -> Dict[str, Any]:
        return {
            'command': command,
            'success': False,
            'exit_code': exc.exit_code,
            'error': to_jsonable(exc.to_dict()),
        }

    @staticmethod
    def dumps(report: Dict[str, Any]) -> str:
        return json.dumps(report, indent=2, sort_keys=False)

    @staticmethod
    def human_lines(data: Dict[str, Any], digits: int = None) -> List[str]:
        """Flatten a report into "key: value" lines."""
        lines = []
        for key, value in data.items():
            if isinstance(value, dict):
                lines.append(f'{key}:')
                lines.extend('  ' + line for line in ReportBuilder.human_lines(value, digits))
            elif isinstance(value, (list, tuple, np.ndarray)) and len(value) and not isinstance(value[0], dict):
                lines.append(f'{key}: {format_vector(value, digits)}')
            elif isinstance(value, (list, tuple)) and len(value):
                lines.append(f'{key}:')
                for item in value:
                    lines.extend('  ' + line for line in ReportBuilder.human_lines(item, digits))
                    lines.append('  --')
            else:
                lines.append(f'{key}: {format_number(value, digits)}')
        return lines
