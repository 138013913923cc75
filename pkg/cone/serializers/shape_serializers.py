from rest_framework import serializers

from cone.serializers.field_serializers import ComplexField


class ShapeFileSerializer(serializers.Serializer):
    """Map from tetrahedron index to the preferred-quad parameter."""
    shapes = serializers.DictField(child=ComplexField(), allow_empty=False)

    def validate_shapes(self, value):
        try:
            indices = sorted(int(key) for key in value)
        except ValueError:
            raise serializers.ValidationError("Shape keys must be tetrahedron indices.")
        if indices != list(range(len(indices))):
            raise serializers.ValidationError("Shape keys must be 0..n-1 without gaps.")
        return [value[str(i)] if str(i) in value else value[i] for i in indices]


class TargetSerializer(serializers.Serializer):
    """Prescribed log-curvatures per edge class and log holonomies per curve."""
    u = serializers.ListField(child=ComplexField(), allow_empty=False)
    t = serializers.ListField(child=ComplexField(), default=list)
