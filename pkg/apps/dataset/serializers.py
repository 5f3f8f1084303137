from rest_framework import serializers

from apps.core.constants import MANIFEST_SCHEMA, MANIFEST_VERSION
from apps.dataset.types import Box, Label, ManifestRecord, TextInstance


class TextInstanceSerializer(serializers.Serializer):
    """
    ``{"label": ..., "quad": [[x, y] x4] | "bbox": [x, y, w, h], "transcription": ...,
    "ignore": false}``

    Geometry is only type-checked here; bounds and degeneracy are reported by
    ``validate_manifest`` so that a bad instance can still be loaded and diagnosed.
    """

    label = serializers.ChoiceField(choices=Label.choices, default=Label.AUTHENTIC)
    quad = serializers.ListField(
        child=serializers.ListField(
            child=serializers.FloatField(), min_length=2, max_length=2
        ),
        min_length=4,
        max_length=4,
        required=False,
    )
    bbox = serializers.ListField(
        child=serializers.FloatField(), min_length=4, max_length=4, required=False
    )
    transcription = serializers.CharField(
        allow_blank=True, allow_null=True, required=False, default=None, trim_whitespace=False
    )
    ignore = serializers.BooleanField(required=False, default=False)

    def validate(self, attrs):
        if ("quad" in attrs) == ("bbox" in attrs):
            raise serializers.ValidationError("Exactly one of 'quad' or 'bbox' is required.")
        if attrs.get("ignore") and attrs.get("label") == Label.TAMPERED:
            raise serializers.ValidationError("A don't-care region cannot be tampered.")
        return attrs

    def create(self, validated_data):
        return build_instance(validated_data)

    def to_representation(self, instance: TextInstance):
        data = {"label": str(instance.label)}
        if instance.quad is not None:
            data["quad"] = [[x, y] for x, y in instance.quad]
        else:
            data["bbox"] = list(instance.box)
        if instance.transcription is not None:
            data["transcription"] = instance.transcription
        if instance.ignore:
            data["ignore"] = True
        return data


def build_instance(data) -> TextInstance:
    quad = tuple(tuple(point) for point in data["quad"]) if "quad" in data else None
    box = Box(*data["bbox"]) if "bbox" in data else None
    return TextInstance(
        label=data.get("label", Label.AUTHENTIC),
        quad=quad,
        box=box,
        transcription=data.get("transcription"),
        ignore=data.get("ignore", False),
    )


class ManifestRecordSerializer(serializers.Serializer):
    image = serializers.CharField()
    width = serializers.IntegerField()
    height = serializers.IntegerField()
    instances = TextInstanceSerializer(many=True, default=list)

    def create(self, validated_data):
        return ManifestRecord(
            image=validated_data["image"],
            width=validated_data["width"],
            height=validated_data["height"],
            instances=tuple(build_instance(item) for item in validated_data["instances"]),
        )

    def to_representation(self, record: ManifestRecord):
        return {
            "image": record.image,
            "width": record.width,
            "height": record.height,
            "instances": [
                TextInstanceSerializer(instance).data for instance in record.instances
            ],
        }


class ManifestHeaderSerializer(serializers.Serializer):
    schema = serializers.ChoiceField(choices=[MANIFEST_SCHEMA])
    version = serializers.IntegerField(min_value=1, max_value=MANIFEST_VERSION)
    metadata = serializers.DictField(default=dict)

    def create(self, validated_data):
        return validated_data


class SessionEntrySerializer(serializers.Serializer):
    train = serializers.CharField()
    test = serializers.CharField()
    tampering_method = serializers.CharField(required=False)
    source_dataset = serializers.CharField(required=False)

    def create(self, validated_data):
        return validated_data
