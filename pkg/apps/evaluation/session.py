"""
Scoring one test manifest against one prediction file.

Counts are micro-averaged: instance TP / #pred / #gt and pixel TP / FP / FN are summed
over every image before P, R, F and IoU are computed.
"""

import logging

from apps.core.exceptions import ParameterError
from apps.dataset.types import Manifest, ManifestRecord
from apps.evaluation.distort import distort_record
from apps.evaluation.metrics import (
    dont_care_map,
    instance_counts,
    pixel_counts,
    rasterize_boxes,
    rasterize_instances,
)
from apps.evaluation.types import (
    ClassScores,
    Distortion,
    EvalMode,
    MatchCounts,
    PixelCounts,
    Prediction,
    PredictionClass,
    PredictionSet,
)

logger = logging.getLogger(__name__)

CLASSES = tuple(PredictionClass.values)


def _kept_predictions(
    record: ManifestRecord, predictions: PredictionSet | None, score_threshold: float
) -> list[Prediction]:
    if predictions is None:
        return []
    return [
        Prediction(p.box.clamped(record.width, record.height), p.cls, p.score)
        for p in predictions.predictions
        if p.score >= score_threshold
    ]


def evaluate_image(
    record: ManifestRecord,
    predictions: PredictionSet | None,
    mode: str,
    iou_threshold: float,
    score_threshold: float,
) -> dict[str, MatchCounts | PixelCounts]:
    preds = _kept_predictions(record, predictions, score_threshold)
    if mode == EvalMode.INSTANCE:
        return {
            cls: instance_counts(preds, list(record.instances), iou_threshold, cls)
            for cls in CLASSES
        }
    pred_maps = rasterize_boxes(preds, record.width, record.height, score_threshold)
    instances = list(record.instances)
    gt_maps = rasterize_instances(instances, record.width, record.height)
    dont_care = dont_care_map(instances, record.width, record.height)
    return {
        cls: pixel_counts(pred_map, gt_map, dont_care)
        for cls, pred_map, gt_map in zip(CLASSES, pred_maps, gt_maps)
    }


def evaluate_session(
    manifest: Manifest,
    predictions: dict[str, PredictionSet],
    mode: str = EvalMode.INSTANCE,
    iou_threshold: float = 0.5,
    score_threshold: float = 0.5,
    distortion: str = Distortion.NONE,
) -> dict[str, ClassScores]:
    """
    Score every image of ``manifest``; images without predictions count as empty
    detections. Predictions are expected in the coordinates of the (possibly distorted)
    image the detector saw, so only ground truth is transformed.

    Returns:
        ``{"real": ClassScores, "tampered": ClassScores}``.
    """
    if mode not in EvalMode.values:
        raise ParameterError(f"Unknown mode {mode!r}")
    if not 0.0 <= score_threshold <= 1.0:
        raise ParameterError("score_threshold must be in [0, 1]")

    known = {record.image for record in manifest.records}
    stray = sorted(set(predictions) - known)
    if stray:
        logger.warning(
            "%d prediction record(s) match no manifest image, e.g. %s", len(stray), stray[0]
        )

    empty = MatchCounts() if mode == EvalMode.INSTANCE else PixelCounts()
    totals = {cls: empty for cls in CLASSES}
    for record in manifest.records:
        counts = evaluate_image(
            distort_record(record, distortion),
            predictions.get(record.image),
            mode,
            iou_threshold,
            score_threshold,
        )
        for cls in CLASSES:
            totals[cls] = totals[cls] + counts[cls]
    return {cls: totals[cls].scores() for cls in CLASSES}
