import pytest
from rest_framework import serializers

from apps.core.exceptions import RecordError
from apps.core.serializers import PairField, flatten_errors, validate_payload


class RangeSerializer(serializers.Serializer):
    name = serializers.CharField()
    span = PairField()

    def create(self, validated_data):
        return validated_data


def test_validate_payload_returns_created_object():
    assert validate_payload(RangeSerializer, {"name": "a", "span": [1, 2.5]}) == {
        "name": "a",
        "span": (1.0, 2.5),
    }


@pytest.mark.parametrize(
    "payload, fragment",
    [
        ({"name": "a", "span": [3, 1]}, "span: Range lower bound"),
        ({"name": "a", "span": [1]}, "span:"),
        ({"span": [1, 2]}, "name:"),
    ],
)
def test_validate_payload_flattens_errors(payload, fragment):
    with pytest.raises(RecordError) as excinfo:
        validate_payload(RangeSerializer, payload, "file.jsonl:3")
    assert str(excinfo.value).startswith("file.jsonl:3: ")
    assert fragment in str(excinfo.value)
    assert excinfo.value.record == payload


def test_flatten_errors_nesting():
    detail = {"a": ["bad"], "b": [{"c": ["worse"]}], "d": "plain"}
    assert flatten_errors(detail) == ["a: bad", "b.0.c: worse", "d: plain"]
