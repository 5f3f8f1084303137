from rest_framework import serializers

from apps.core.exceptions import RecordError


class PairField(serializers.ListField):
    """A ``[lo, hi]`` range with ``lo <= hi``."""

    def __init__(self, child=None, **kwargs):
        kwargs.setdefault("min_length", 2)
        kwargs.setdefault("max_length", 2)
        super().__init__(child=child or serializers.FloatField(), **kwargs)

    def to_internal_value(self, data):
        values = super().to_internal_value(data)
        if len(values) != 2:
            raise serializers.ValidationError("Expected a [lower, upper] pair.")
        lo, hi = values
        if lo > hi:
            raise serializers.ValidationError("Range lower bound must not exceed upper bound.")
        return (lo, hi)


def flatten_errors(detail, prefix="") -> list[str]:
    """Turn a DRF ``ValidationError.detail`` tree into ``"field: message"`` strings."""
    if isinstance(detail, dict):
        messages = []
        for key, value in detail.items():
            messages.extend(flatten_errors(value, f"{prefix}{key}."))
        return messages
    if isinstance(detail, list):
        messages = []
        for index, value in enumerate(detail):
            if isinstance(value, (dict, list)):
                messages.extend(flatten_errors(value, f"{prefix}{index}."))
            else:
                messages.append(f"{prefix.rstrip('.') or 'record'}: {value}")
        return messages
    return [f"{prefix.rstrip('.') or 'record'}: {detail}"]


def validate_payload(serializer_class, payload, where: str = "", **context):
    """
    Run a serializer over a raw payload.

    Args:
        serializer_class: DRF serializer class to instantiate.
        payload: Raw (JSON-decoded) data.
        where: Location prefix for error messages (file:line).

    Returns:
        Whatever the serializer's ``create`` builds from the validated data.

    Raises:
        RecordError: validation failed.
    """
    serializer = serializer_class(data=payload, context=context)
    if not serializer.is_valid():
        message = "; ".join(flatten_errors(serializer.errors))
        raise RecordError(f"{where}: {message}" if where else message, record=payload)
    return serializer.save()
