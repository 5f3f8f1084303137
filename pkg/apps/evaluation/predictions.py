"""
Prediction file loading (JSON Lines, one record per image).
"""

import logging

from apps.core.exceptions import RecordError
from apps.core.jsonl import read_jsonl
from apps.core.serializers import validate_payload
from apps.evaluation.serializers import PredictionSetSerializer
from apps.evaluation.types import PredictionSet

logger = logging.getLogger(__name__)


def load_predictions(path) -> dict[str, PredictionSet]:
    """
    Raises:
        RecordError: malformed record or an image listed twice.
    """
    predictions = {}
    for line_no, payload in read_jsonl(path):
        where = f"{path}:{line_no}"
        item = validate_payload(PredictionSetSerializer, payload, where)
        if item.image in predictions:
            raise RecordError(f"{where}: duplicate predictions for {item.image}", record=payload)
        predictions[item.image] = item
    logger.debug("Loaded predictions for %d image(s) from %s", len(predictions), path)
    return predictions
