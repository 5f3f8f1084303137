"""
Jitter configuration: settings defaults merged with user overrides, validated by
``JitterConfigSerializer``.
"""

import copy
import json
import logging
from pathlib import Path

from django.conf import settings

from apps.core.exceptions import ConfigurationError, RecordError
from apps.core.serializers import validate_payload
from apps.jitter.serializers import JitterConfigSerializer
from apps.jitter.types import JitterConfig

logger = logging.getLogger(__name__)


def build_config(overrides: dict | None = None, **fields) -> JitterConfig:
    """
    Merge ``settings.JITTER`` with an overrides mapping and keyword fields.

    Keyword fields whose value is None are ignored, so CLI flags can be passed through
    unconditionally.

    Raises:
        ConfigurationError: the merged configuration is invalid.
    """
    data = copy.deepcopy(settings.JITTER)
    data.update(copy.deepcopy(overrides or {}))
    data.update({key: value for key, value in fields.items() if value is not None})
    try:
        return validate_payload(JitterConfigSerializer, data, "jitter config")
    except RecordError as exc:
        raise ConfigurationError(str(exc)) from exc


def load_config_file(path) -> dict:
    try:
        overrides = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"Cannot read jitter config {path}: {exc}") from exc
    if not isinstance(overrides, dict):
        raise ConfigurationError(f"{path}: jitter config must be a JSON object")
    return overrides
