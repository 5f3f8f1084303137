"""
Training losses: classification (binary cross-entropy), box regression (L1) and the
feature-distance loss that pulls authentic RoI features towards the authentic kernel and
pushes tampered ones at least ``margin`` further away.
"""

import logging

import numpy as np

from apps.core.exceptions import ParameterError
from apps.daf.head import forward, modulated_kernel
from apps.daf.types import DafParams, DistanceTarget, FeatureBatch, LossBreakdown

logger = logging.getLogger(__name__)

PROB_EPS = 1e-7


def loss_cls(probs, labels) -> float:
    p = np.clip(np.asarray(probs, dtype=np.float64), PROB_EPS, 1.0 - PROB_EPS)
    y = np.asarray(labels, dtype=np.float64)
    if p.shape != y.shape:
        raise ParameterError(f"probs shape {p.shape} != labels shape {y.shape}")
    return float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))))


def distance_targets(batch: FeatureBatch, params: DafParams) -> np.ndarray:
    """N x D: the vector each RoI feature is measured against."""
    if params.distance_target == DistanceTarget.MODULATED:
        return modulated_kernel(batch, params)
    if batch.dim != params.dim:
        raise ParameterError(f"batch dimension {batch.dim} != parameter dimension {params.dim}")
    return np.broadcast_to(params.kernel, batch.roi_vectors.shape)


def distances(batch: FeatureBatch, params: DafParams) -> np.ndarray:
    return np.linalg.norm(batch.roi_vectors - distance_targets(batch, params), axis=1)


def group_means(dist: np.ndarray, labels: np.ndarray) -> tuple[float, float]:
    """
    Mean distance of the authentic and of the tampered rows; an empty group contributes 0.
    """
    authentic = dist[~labels]
    tampered = dist[labels]
    if authentic.size == 0 or tampered.size == 0:
        logger.warning(
            "Feature loss on a batch without %s instances; missing mean distance taken as 0",
            "authentic" if authentic.size == 0 else "tampered",
        )
    dist_auth = float(authentic.mean()) if authentic.size else 0.0
    dist_tamp = float(tampered.mean()) if tampered.size else 0.0
    return dist_auth, dist_tamp


def loss_feat(batch: FeatureBatch, params: DafParams) -> tuple[float, float, float]:
    """
    Returns:
        ``(l_feat, dist_auth, dist_tamp)`` with
        ``l_feat = dist_auth + max(dist_auth - dist_tamp + margin, 0)``.
    """
    dist_auth, dist_tamp = group_means(distances(batch, params), batch.labels)
    hinge = max(dist_auth - dist_tamp + params.margin, 0.0)
    return dist_auth + hinge, dist_auth, dist_tamp


def loss_bbox(pred_boxes, target_boxes) -> float:
    pred = np.atleast_2d(np.asarray(pred_boxes, dtype=np.float64))
    target = np.atleast_2d(np.asarray(target_boxes, dtype=np.float64))
    if pred.shape != target.shape or pred.ndim != 2 or pred.shape[1] != 4:
        raise ParameterError(f"box shapes {pred.shape} and {target.shape} must match as N x 4")
    if pred.size == 0:
        return 0.0
    return float(np.mean(np.abs(pred - target)))


def total_loss(
    batch: FeatureBatch, params: DafParams, pred_boxes=None, target_boxes=None
) -> LossBreakdown:
    """Unit-weighted sum of the three losses. Boxes default to none (``l_bbox = 0``)."""
    l_cls = loss_cls(forward(batch, params), batch.labels)
    l_bbox = 0.0 if pred_boxes is None else loss_bbox(pred_boxes, target_boxes)
    l_feat, dist_auth, dist_tamp = loss_feat(batch, params)
    return LossBreakdown(
        l_cls=l_cls,
        l_bbox=l_bbox,
        l_feat=l_feat,
        l_all=l_cls + l_bbox + l_feat,
        dist_auth=dist_auth,
        dist_tamp=dist_tamp,
    )
