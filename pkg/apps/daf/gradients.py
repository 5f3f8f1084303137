"""
Analytic gradients of the total loss, and their verification against central finite
differences.
"""

import logging

import numpy as np

from apps.core.exceptions import KinkError
from apps.daf.head import forward, modulated_kernel, modulation_inputs
from apps.daf.losses import PROB_EPS, distance_targets, group_means, total_loss
from apps.daf.types import PARAM_BLOCKS, DafParams, DistanceTarget, FeatureBatch

logger = logging.getLogger(__name__)

# Distances or hinge arguments closer than this multiple of epsilon to zero make the
# finite difference straddle a kink.
KINK_FACTOR = 1e3


def gradients(
    batch: FeatureBatch, params: DafParams, pred_boxes=None, target_boxes=None
) -> dict[str, np.ndarray]:
    """
    Gradient of ``total_loss`` with respect to every parameter block, plus ``roi_vectors``:
    the gradient of the feature loss with respect to each RoI feature.

    The L1 box term has no trainable parameters here and contributes nothing. Where a
    probability was clamped, or a feature coincides with its target, the
    (sub)gradient is taken as zero.
    """
    n = batch.n
    labels = batch.labels
    y = labels.astype(np.float64)
    inputs = modulation_inputs(batch)
    v_m = modulated_kernel(batch, params)
    difference = batch.roi_vectors - v_m

    # Classification branch.
    p = forward(batch, params)
    d_logit = (p - y) / n
    d_logit[(p <= PROB_EPS) | (p >= 1.0 - PROB_EPS)] = 0.0
    grads = {
        "cls_bias": np.array([d_logit.sum()]),
        "cls_weight": d_logit @ difference,
    }
    d_vm = -np.outer(d_logit, params.cls_weight)

    # Feature-distance branch.
    offsets = batch.roi_vectors - distance_targets(batch, params)
    dist = np.linalg.norm(offsets, axis=1)
    safe = np.where(dist > 0, dist, 1.0)
    units = np.where(dist[:, None] > 0, offsets / safe[:, None], 0.0)
    dist_auth, dist_tamp = group_means(dist, labels)
    active = 1.0 if dist_auth - dist_tamp + params.margin > 0 else 0.0

    n_auth = int((~labels).sum())
    n_tamp = int(labels.sum())
    # d l_feat / d dist_i
    weights = np.zeros(n)
    if n_auth:
        weights[~labels] = (1.0 + active) / n_auth
    if n_tamp:
        weights[labels] = -active / n_tamp
    d_offsets = weights[:, None] * units

    d_roi = d_offsets.copy()
    if params.distance_target == DistanceTarget.MODULATED:
        d_vm = d_vm - d_offsets
        # V_m depends on the RoI feature through the right half of the modulation map.
        d_roi -= d_offsets @ params.mod_weight[:, batch.dim :]
        grads["kernel"] = np.zeros(params.dim)
    else:
        grads["kernel"] = -d_offsets.sum(axis=0)

    grads["mod_weight"] = d_vm.T @ inputs
    grads["mod_bias"] = d_vm.sum(axis=0)
    grads["roi_vectors"] = d_roi
    return grads


def _loss(batch, params, pred_boxes, target_boxes) -> float:
    return total_loss(batch, params, pred_boxes, target_boxes).l_all


def numeric_gradients(
    batch: FeatureBatch,
    params: DafParams,
    epsilon: float,
    pred_boxes=None,
    target_boxes=None,
) -> dict[str, np.ndarray]:
    numeric = {}
    for name, block in params.blocks().items():
        flat = block.astype(np.float64).ravel()
        grad = np.zeros_like(flat)
        for index in range(flat.size):
            shifted = {}
            for sign in (1.0, -1.0):
                trial = flat.copy()
                trial[index] += sign * epsilon
                value = trial.reshape(block.shape)
                candidate = params.with_blocks(**{name: value})
                shifted[sign] = _loss(batch, candidate, pred_boxes, target_boxes)
            grad[index] = (shifted[1.0] - shifted[-1.0]) / (2.0 * epsilon)
        numeric[name] = grad.reshape(block.shape)
    return numeric


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = np.linalg.norm(analytic) + np.linalg.norm(numeric)
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(analytic - numeric) / scale)


def check_kinks(batch: FeatureBatch, params: DafParams, epsilon: float):
    """
    Raises:
        KinkError: a feature sits on its distance target, or the hinge argument is ~0.
    """
    tolerance = KINK_FACTOR * epsilon
    dist = np.linalg.norm(batch.roi_vectors - distance_targets(batch, params), axis=1)
    if np.any(dist < tolerance):
        raise KinkError("a RoI feature coincides with its distance target; re-sample the batch")
    dist_auth, dist_tamp = group_means(dist, batch.labels)
    if abs(dist_auth - dist_tamp + params.margin) < tolerance:
        raise KinkError("the margin hinge is at its kink; re-sample the batch")


def block_errors(
    params: DafParams,
    batch: FeatureBatch,
    epsilon: float = 1e-6,
    pred_boxes=None,
    target_boxes=None,
) -> dict[str, float]:
    check_kinks(batch, params, epsilon)
    analytic = gradients(batch, params, pred_boxes, target_boxes)
    numeric = numeric_gradients(batch, params, epsilon, pred_boxes, target_boxes)
    errors = {
        name: relative_error(analytic[name].reshape(numeric[name].shape), numeric[name])
        for name in PARAM_BLOCKS
    }
    logger.debug("Gradient check relative errors: %s", errors)
    return errors


def grad_check(
    params: DafParams,
    batch: FeatureBatch,
    epsilon: float = 1e-6,
    pred_boxes=None,
    target_boxes=None,
) -> float:
    """Maximum per-block relative error ``|a - n| / (|a| + |n|)``."""
    return max(block_errors(params, batch, epsilon, pred_boxes, target_boxes).values())
