from rest_framework import serializers


class CurveSerializer(serializers.Serializer):
    name = serializers.CharField()
    role = serializers.ChoiceField(choices=['longitude', 'meridian'], default='longitude')
    vertex_class = serializers.IntegerField(required=False, allow_null=True, min_value=0)
    entries = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(), min_length=3, max_length=3),
        required=False,
    )
    steps = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0), min_length=4, max_length=4),
        required=False,
    )
    dual = serializers.CharField(required=False, allow_null=True)

    def validate(self, attrs):
        for tet, level, _ in attrs.get('entries', []):
            if tet < 0 or level not in (0, 1, 2):
                raise serializers.ValidationError("Entries are (tet, level 0-2, coefficient).")
        return attrs


class CurveFileSerializer(serializers.Serializer):
    format = serializers.ChoiceField(choices=['arcpath', 'indvector'])
    curves = CurveSerializer(many=True)

    def validate(self, attrs):
        key = 'steps' if attrs['format'] == 'arcpath' else 'entries'
        names = set()
        for curve in attrs['curves']:
            if key not in curve:
                raise serializers.ValidationError(f"Curve '{curve['name']}' has no {key}.")
            if attrs['format'] == 'arcpath' and curve.get('vertex_class') is None:
                raise serializers.ValidationError(f"Curve '{curve['name']}' needs a vertex_class.")
            if curve['name'] in names:
                raise serializers.ValidationError(f"Curve name '{curve['name']}' is repeated.")
            names.add(curve['name'])
        return attrs
