"""
Instance-level and pixel-level scoring primitives.

Boxes are rasterized as the integer rectangle covering them (floor of the top-left
corner, ceil of the bottom-right), clamped to the image.
"""

import numpy as np

from apps.core.exceptions import ParameterError
from apps.dataset.types import Box, TextInstance
from apps.evaluation.types import (
    LABEL_TO_CLASS,
    ClassScores,
    MatchCounts,
    PixelCounts,
    Prediction,
    PredictionClass,
)


def box_iou(a: Box, b: Box) -> float:
    """Analytic intersection-over-union in [0, 1]."""
    ix = max(0.0, min(a.x + a.w, b.x + b.w) - max(a.x, b.x))
    iy = max(0.0, min(a.y + a.h, b.y + b.h) - max(a.y, b.y))
    inter = ix * iy
    union = a.area + b.area - inter
    return inter / union if union > 0 else 0.0


def _empty_maps(width: int, height: int):
    if width < 1 or height < 1:
        raise ParameterError("width and height must be >= 1")
    return {cls: np.zeros((height, width), dtype=bool) for cls in PredictionClass.values}


def rasterize_boxes(
    preds: list[Prediction], width: int, height: int, score_threshold: float
) -> tuple[np.ndarray, np.ndarray]:
    """
    Returns:
        ``(real_map, tampered_map)`` boolean masks of shape ``(height, width)``.
    """
    maps = _empty_maps(width, height)
    for prediction in preds:
        if prediction.score < score_threshold:
            continue
        maps[prediction.cls][prediction.box.pixel_rect(width, height).slices] = True
    return maps[PredictionClass.REAL], maps[PredictionClass.TAMPERED]


def rasterize_instances(
    instances: list[TextInstance], width: int, height: int
) -> tuple[np.ndarray, np.ndarray]:
    """Ground-truth maps; quads are filled through their axis-aligned bbox."""
    maps = _empty_maps(width, height)
    for instance in instances:
        if instance.ignore:
            continue
        maps[LABEL_TO_CLASS[instance.label]][instance.pixel_rect(width, height).slices] = True
    return maps[PredictionClass.REAL], maps[PredictionClass.TAMPERED]


def dont_care_map(instances: list[TextInstance], width: int, height: int) -> np.ndarray:
    """Pixels covered by a don't-care region and by no scored ground truth."""
    ignored = np.zeros((height, width), dtype=bool)
    for instance in instances:
        if instance.ignore:
            ignored[instance.pixel_rect(width, height).slices] = True
    real, tampered = rasterize_instances(instances, width, height)
    return ignored & ~(real | tampered)


def pixel_counts(
    pred_map: np.ndarray, gt_map: np.ndarray, dont_care: np.ndarray | None = None
) -> PixelCounts:
    if pred_map.shape != gt_map.shape:
        raise ParameterError(f"map shape mismatch {pred_map.shape} vs {gt_map.shape}")
    pred = pred_map.astype(bool)
    gt = gt_map.astype(bool)
    if dont_care is not None:
        scored = ~dont_care.astype(bool)
        pred = pred & scored
        gt = gt & scored
    return PixelCounts(
        true_positives=int(np.count_nonzero(pred & gt)),
        false_positives=int(np.count_nonzero(pred & ~gt)),
        false_negatives=int(np.count_nonzero(~pred & gt)),
    )


def pixel_metrics(pred_map: np.ndarray, gt_map: np.ndarray) -> ClassScores:
    return pixel_counts(pred_map, gt_map).scores()


def match_instances(
    preds: list[Prediction],
    gt_boxes: list[Box],
    iou_threshold: float,
    ignore_boxes: list[Box] = (),
) -> MatchCounts:
    """
    Greedy one-to-one matching of same-class predictions to ground truth.

    Predictions are visited by descending score; equal scores are ordered by their best
    IoU against any ground truth (higher first), then input order. Each prediction takes
    the unmatched ground truth with the highest IoU at or above the threshold (lowest
    index on ties). A prediction left unmatched that reaches the threshold against a
    don't-care box in ``ignore_boxes`` is dropped from the prediction count.
    """
    if not 0.0 <= iou_threshold <= 1.0:
        raise ParameterError("iou_threshold must be in [0, 1]")
    ious = np.array(
        [[box_iou(prediction.box, gt) for gt in gt_boxes] for prediction in preds],
        dtype=np.float64,
    ).reshape(len(preds), len(gt_boxes))
    best = ious.max(axis=1) if gt_boxes else np.zeros(len(preds))
    order = sorted(range(len(preds)), key=lambda i: (-preds[i].score, -best[i], i))

    matched = np.zeros(len(gt_boxes), dtype=bool)
    true_positives = 0
    dropped = 0
    for i in order:
        candidates = np.where(matched, -1.0, ious[i])
        if candidates.size:
            j = int(np.argmax(candidates))
            if not matched[j] and candidates[j] >= iou_threshold:
                matched[j] = True
                true_positives += 1
                continue
        if any(box_iou(preds[i].box, box) >= iou_threshold for box in ignore_boxes):
            dropped += 1
    return MatchCounts(true_positives, len(preds) - dropped, len(gt_boxes))


def instance_counts(
    preds: list[Prediction], gts: list[TextInstance], iou_threshold: float, cls: str
) -> MatchCounts:
    class_preds = [prediction for prediction in preds if prediction.cls == cls]
    gt_boxes = [
        instance.bbox
        for instance in gts
        if not instance.ignore and LABEL_TO_CLASS[instance.label] == cls
    ]
    ignore_boxes = [instance.bbox for instance in gts if instance.ignore]
    return match_instances(class_preds, gt_boxes, iou_threshold, ignore_boxes)


def instance_metrics(
    preds: list[Prediction], gts: list[TextInstance], iou_threshold: float, cls: str
) -> ClassScores:
    return instance_counts(preds, gts, iou_threshold, cls).scores()
