"""
Forward path of the forensics head: the authentic kernel is modulated per text from the
global image feature and the text's own RoI feature, and the classifier scores the
difference between the RoI feature and that modulated kernel.
"""

import numpy as np
from scipy.special import expit

from apps.core.exceptions import ParameterError
from apps.daf.types import DafParams, FeatureBatch


def _check_dims(batch: FeatureBatch, params: DafParams):
    if batch.dim != params.dim:
        raise ParameterError(f"batch dimension {batch.dim} != parameter dimension {params.dim}")


def modulation_inputs(batch: FeatureBatch) -> np.ndarray:
    """N x 2D rows of ``[global_vector; roi_vector]``."""
    tiled = np.broadcast_to(batch.global_vector, batch.roi_vectors.shape)
    return np.hstack([tiled, batch.roi_vectors])


def modulated_kernel(batch: FeatureBatch, params: DafParams) -> np.ndarray:
    _check_dims(batch, params)
    return modulation_inputs(batch) @ params.mod_weight.T + params.mod_bias


def logits(batch: FeatureBatch, params: DafParams) -> np.ndarray:
    difference = batch.roi_vectors - modulated_kernel(batch, params)
    return difference @ params.cls_weight + params.cls_bias


def forward(batch: FeatureBatch, params: DafParams) -> np.ndarray:
    """Per-instance tampered probability."""
    return expit(logits(batch, params))
