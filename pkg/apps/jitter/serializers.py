import math

from rest_framework import serializers

from apps.core.serializers import PairField
from apps.dataset.types import Rect
from apps.jitter.types import (
    IntensityParams,
    JitterConfig,
    JitterOp,
    JitterRecipe,
    OpKind,
    SizeBucket,
)


class IntensityParamsSerializer(serializers.Serializer):
    blur_sigma_range = PairField(child=serializers.FloatField(min_value=0.0))
    jpeg_quality_range = PairField(child=serializers.IntegerField(min_value=1, max_value=100))
    sharpen_strength_range = PairField(
        child=serializers.FloatField(min_value=0.0, max_value=1.0)
    )
    downsample_factor_range = PairField(
        child=serializers.FloatField(min_value=1.0), default=(1.5, 2.0)
    )
    motion_length_range = PairField(
        child=serializers.IntegerField(min_value=1), default=(3, 5)
    )
    deblock_strength_range = PairField(
        child=serializers.FloatField(min_value=0.0, max_value=1.0), default=(0.5, 1.0)
    )
    feather_width = serializers.IntegerField(min_value=0)

    def validate_downsample_factor_range(self, value):
        if value[0] <= 1.0:
            raise serializers.ValidationError("Down-sampling factors must be > 1.")
        return value

    def create(self, validated_data):
        return IntensityParams(**validated_data)


class SizeBucketSerializer(serializers.Serializer):
    max_scale = serializers.FloatField(allow_null=True, min_value=0.0)
    params = IntensityParamsSerializer()

    def create(self, validated_data):
        return build_bucket(validated_data)


def build_bucket(data) -> SizeBucket:
    max_scale = data["max_scale"]
    return SizeBucket(
        max_scale=math.inf if max_scale is None else max_scale,
        params=IntensityParams(**data["params"]),
    )


class JitterConfigSerializer(serializers.Serializer):
    """
    Validates the merged jitter configuration (settings defaults + ``--config`` overrides).
    """

    selection_prob = serializers.FloatField(min_value=0.0, max_value=1.0)
    min_text_side = serializers.IntegerField(min_value=1)
    global_seed = serializers.IntegerField(min_value=0)
    max_attempts = serializers.IntegerField(min_value=1)
    mad_min = serializers.FloatField(min_value=0.0)
    mad_max = serializers.FloatField(min_value=0.0)
    size_buckets = SizeBucketSerializer(many=True, allow_empty=False)

    def validate_size_buckets(self, value):
        scales = [math.inf if item["max_scale"] is None else item["max_scale"] for item in value]
        if scales != sorted(scales):
            raise serializers.ValidationError("Buckets must be sorted by max_scale ascending.")
        return value

    def validate(self, attrs):
        if attrs["mad_min"] > attrs["mad_max"]:
            raise serializers.ValidationError("mad_min must not exceed mad_max.")
        return attrs

    def create(self, validated_data):
        buckets = tuple(build_bucket(item) for item in validated_data.pop("size_buckets"))
        return JitterConfig(size_buckets=buckets, **validated_data)


class JitterOpSerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=OpKind.choices)
    params = serializers.DictField(child=serializers.FloatField())


def _rect(value):
    return Rect(*(int(v) for v in value)) if value is not None else None


class JitterRecipeSerializer(serializers.Serializer):
    image_id = serializers.CharField(allow_null=True, required=False, default=None)
    instance_index = serializers.IntegerField(min_value=0)
    ops = JitterOpSerializer(many=True, min_length=1, max_length=2)
    feather_width = serializers.IntegerField(min_value=0)
    seed = serializers.IntegerField(min_value=0)
    region = serializers.ListField(
        child=serializers.IntegerField(),
        min_length=4,
        max_length=4,
        allow_null=True,
        required=False,
        default=None,
    )
    context = serializers.ListField(
        child=serializers.IntegerField(),
        min_length=4,
        max_length=4,
        allow_null=True,
        required=False,
        default=None,
    )

    def create(self, validated_data):
        ops = tuple(
            JitterOp(kind=item["kind"], params=_typed_params(item["kind"], item["params"]))
            for item in validated_data["ops"]
        )
        return JitterRecipe(
            instance_index=validated_data["instance_index"],
            ops=ops,
            feather_width=validated_data["feather_width"],
            seed=validated_data["seed"],
            region=_rect(validated_data["region"]),
            context=_rect(validated_data["context"]),
            image_id=validated_data["image_id"],
        )


INTEGER_PARAMS = {OpKind.MOTION: ("length",), OpKind.JPEG: ("quality",)}


def _typed_params(kind, params) -> dict:
    integer_names = INTEGER_PARAMS.get(kind, ())
    return {
        name: int(value) if name in integer_names else float(value)
        for name, value in params.items()
    }
