from rest_framework import serializers

from cone.constants import EDGE_LABELS, QUAD_SLOT_OF_EDGE


class ComplexField(serializers.Field):
    """Complex number as a [re, im] pair."""
    default_error_messages = {
        'invalid': 'Expected a [re, im] pair of numbers.',
    }

    def to_internal_value(self, data):
        if isinstance(data, (int, float)) and not isinstance(data, bool):
            return complex(data, 0.0)
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            self.fail('invalid')
        try:
            return complex(float(data[0]), float(data[1]))
        except (TypeError, ValueError):
            self.fail('invalid')

    def to_representation(self, value):
        value = complex(value)
        return [float(value.real), float(value.imag)]


class ConventionSerializer(serializers.Serializer):
    """Preferred quad per tetrahedron, as a slot 0..2 or a base edge label such as "12"."""
    preferred = serializers.ListField(child=serializers.CharField(), allow_empty=False)
    orientation = serializers.ChoiceField(choices=[1, -1], default=1)

    def validate_preferred(self, value):
        slots = []
        for item in value:
            item = str(item).strip()
            if item in ('0', '1', '2'):
                slots.append(int(item))
            elif item in EDGE_LABELS:
                slots.append(QUAD_SLOT_OF_EDGE[(int(item[0]), int(item[1]))])
            else:
                raise serializers.ValidationError(f"Unknown quad '{item}'; use a slot 0-2 or an edge label.")
        return slots
