import math

from rest_framework import serializers

from apps.dataset.types import Box
from apps.evaluation.types import Prediction, PredictionClass, PredictionSet


class PredictionSerializer(serializers.Serializer):
    bbox = serializers.ListField(child=serializers.FloatField(), min_length=4, max_length=4)
    # ``class`` is a keyword, so the field is declared below.
    score = serializers.FloatField(min_value=0.0, max_value=1.0)

    def get_fields(self):
        fields = super().get_fields()
        fields["class"] = serializers.ChoiceField(choices=PredictionClass.choices)
        return fields

    def validate_bbox(self, value):
        if not all(math.isfinite(v) for v in value):
            raise serializers.ValidationError("Box coordinates must be finite.")
        if value[2] < 0 or value[3] < 0:
            raise serializers.ValidationError("Box width and height must be >= 0.")
        return value

    def validate_score(self, value):
        if not math.isfinite(value):
            raise serializers.ValidationError("Score must be finite.")
        return value

    def create(self, validated_data):
        return build_prediction(validated_data)


def build_prediction(data) -> Prediction:
    return Prediction(box=Box(*data["bbox"]), cls=data["class"], score=data["score"])


class PredictionSetSerializer(serializers.Serializer):
    """``{"image": path, "predictions": [{"bbox": [x, y, w, h], "class": ..., "score": ...}]}``"""

    image = serializers.CharField()
    predictions = PredictionSerializer(many=True, allow_empty=True)

    def create(self, validated_data):
        return PredictionSet(
            image=validated_data["image"],
            predictions=tuple(build_prediction(item) for item in validated_data["predictions"]),
        )
