"""
Difference-aware forensics head: data and parameter containers.

Every array is float64; shapes are checked once on construction.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from django.db import models

from apps.core.exceptions import ParameterError

DEFAULT_MARGIN = 32.0

PARAM_BLOCKS = ("kernel", "mod_weight", "mod_bias", "cls_weight", "cls_bias")


class DistanceTarget(models.TextChoices):
    KERNEL = "kernel", "Authentic kernel K"
    MODULATED = "modulated", "Modulated kernel V_m"


def _finite_array(name, value, ndim) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    if array.ndim != ndim:
        raise ParameterError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ParameterError(f"{name} must be finite")
    return array


@dataclass(frozen=True)
class FeatureBatch:
    """
    ``roi_vectors`` is N x D (one pooled feature per text), ``global_vector`` is the
    image-level average feature, ``labels`` marks tampered rows.
    """

    roi_vectors: np.ndarray
    global_vector: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        roi = _finite_array("roi_vectors", self.roi_vectors, 2)
        glob = _finite_array("global_vector", self.global_vector, 1)
        labels = np.asarray(self.labels, dtype=bool)
        if roi.shape[0] < 1 or roi.shape[1] < 1:
            raise ParameterError("a batch needs N >= 1 and D >= 1")
        if glob.shape != (roi.shape[1],):
            raise ParameterError(f"global_vector must have length {roi.shape[1]}")
        if labels.shape != (roi.shape[0],):
            raise ParameterError(f"labels must have length {roi.shape[0]}")
        object.__setattr__(self, "roi_vectors", roi)
        object.__setattr__(self, "global_vector", glob)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.roi_vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.roi_vectors.shape[1]

    def with_roi(self, roi_vectors) -> "FeatureBatch":
        return FeatureBatch(roi_vectors, self.global_vector, self.labels)


@dataclass(frozen=True)
class DafParams:
    """
    kernel: K, length D.
    mod_weight / mod_bias: D x 2D map from ``[global; roi]`` to V_m.
    cls_weight / cls_bias: D -> 1 classifier applied to ``roi - V_m``.
    """

    kernel: np.ndarray
    mod_weight: np.ndarray
    mod_bias: np.ndarray
    cls_weight: np.ndarray
    cls_bias: float = 0.0
    margin: float = DEFAULT_MARGIN
    distance_target: str = DistanceTarget.KERNEL

    def __post_init__(self):
        kernel = _finite_array("kernel", self.kernel, 1)
        dim = kernel.shape[0]
        mod_weight = _finite_array("mod_weight", self.mod_weight, 2)
        mod_bias = _finite_array("mod_bias", self.mod_bias, 1)
        cls_weight = _finite_array("cls_weight", self.cls_weight, 1)
        if mod_weight.shape != (dim, 2 * dim):
            raise ParameterError(f"mod_weight must be {dim}x{2 * dim}, got {mod_weight.shape}")
        if mod_bias.shape != (dim,) or cls_weight.shape != (dim,):
            raise ParameterError(f"mod_bias and cls_weight must have length {dim}")
        if not np.isfinite(self.cls_bias):
            raise ParameterError("cls_bias must be finite")
        if not np.isfinite(self.margin) or self.margin <= 0:
            raise ParameterError("margin must be finite and > 0")
        if self.distance_target not in DistanceTarget.values:
            raise ParameterError(f"Unknown distance target {self.distance_target!r}")
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "mod_weight", mod_weight)
        object.__setattr__(self, "mod_bias", mod_bias)
        object.__setattr__(self, "cls_weight", cls_weight)
        object.__setattr__(self, "cls_bias", float(self.cls_bias))
        object.__setattr__(self, "margin", float(self.margin))

    @classmethod
    def zeros(cls, dim: int, **kwargs) -> "DafParams":
        return cls(
            kernel=np.zeros(dim),
            mod_weight=np.zeros((dim, 2 * dim)),
            mod_bias=np.zeros(dim),
            cls_weight=np.zeros(dim),
            **kwargs,
        )

    @property
    def dim(self) -> int:
        return self.kernel.shape[0]

    def blocks(self) -> dict[str, np.ndarray]:
        return {name: np.atleast_1d(np.asarray(getattr(self, name))) for name in PARAM_BLOCKS}

    def with_blocks(self, **blocks) -> "DafParams":
        if "cls_bias" in blocks:
            blocks["cls_bias"] = float(np.asarray(blocks["cls_bias"]).reshape(()))
        return replace(self, **blocks)

    def stepped(self, grads: dict[str, np.ndarray], learning_rate: float) -> "DafParams":
        """One plain gradient-descent update."""
        return self.with_blocks(
            **{
                name: np.asarray(getattr(self, name)) - learning_rate * grads[name]
                for name in PARAM_BLOCKS
            }
        )

    def as_dict(self) -> dict:
        return {
            **{name: np.asarray(getattr(self, name)).tolist() for name in PARAM_BLOCKS},
            "margin": self.margin,
            "distance_target": str(self.distance_target),
        }


@dataclass(frozen=True)
class LossBreakdown:
    l_cls: float
    l_bbox: float
    l_feat: float
    l_all: float
    dist_auth: float
    dist_tamp: float

    def as_dict(self) -> dict:
        return {
            "l_cls": self.l_cls,
            "l_bbox": self.l_bbox,
            "l_feat": self.l_feat,
            "l_all": self.l_all,
            "dist_auth": self.dist_auth,
            "dist_tamp": self.dist_tamp,
        }


@dataclass
class ToyReport:
    steps: int
    kernel_error: float
    accuracy: float
    final: LossBreakdown
    curves: dict[str, list[float]] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "steps": self.steps,
            "kernel_error": self.kernel_error,
            "accuracy": self.accuracy,
            "final": self.final.as_dict(),
            "curves": self.curves,
        }
