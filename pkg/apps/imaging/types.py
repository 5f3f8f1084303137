"""
Image and kernel types.

An image is a C-contiguous ``uint8`` numpy array of shape ``(height, width, 3)``.
Filtering happens on a ``float64`` working copy that is clamped and quantized once.
"""

import math
from dataclasses import dataclass

import numpy as np
from django.db import models

from apps.core.constants import PIXEL_MAX, PIXEL_MIN
from apps.core.exceptions import ParameterError

Image = np.ndarray

CHANNELS = 3


class KernelKind(models.TextChoices):
    GAUSSIAN = "gaussian", "Gaussian blur"
    DOWNSAMPLE = "downsample", "Down-sampling blur"
    MOTION = "motion", "Motion blur"
    SHARPEN = "sharpen", "Sharpen"


@dataclass(frozen=True)
class KernelSpec:
    """
    Parameters of one blur/sharpen family; only the fields of ``kind`` are read.
    """

    kind: str
    sigma: float = 0.0
    factor: float = 2.0
    length: int = 1
    angle: float = 0.0
    strength: float = 0.0

    def __post_init__(self):
        if self.kind not in KernelKind.values:
            raise ParameterError(f"Unknown kernel kind {self.kind!r}")
        for name in ("sigma", "factor", "angle", "strength"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.kind == KernelKind.GAUSSIAN and self.sigma < 0:
            raise ParameterError("sigma must be >= 0")
        if self.kind == KernelKind.DOWNSAMPLE and self.factor <= 1:
            raise ParameterError("factor must be > 1")
        if self.kind == KernelKind.MOTION and self.length < 1:
            raise ParameterError("length must be >= 1")
        if self.kind == KernelKind.SHARPEN and not 0.0 <= self.strength <= 1.0:
            raise ParameterError("strength must be in [0, 1]")


def ensure_image(img) -> Image:
    """
    Validate an image array.

    Raises:
        ParameterError: wrong dtype, rank, channel count or an empty side.
    """
    if not isinstance(img, np.ndarray) or img.dtype != np.uint8:
        raise ParameterError("image must be a uint8 numpy array")
    if img.ndim != 3 or img.shape[2] != CHANNELS:
        raise ParameterError(f"image must have shape (height, width, {CHANNELS})")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ParameterError("image width and height must be >= 1")
    return img


def to_float(img: Image) -> np.ndarray:
    return img.astype(np.float64)


def quantize(work: np.ndarray) -> Image:
    """Clamp a float working image to [0, 255] and round to the nearest 8-bit sample."""
    return np.ascontiguousarray(
        np.rint(np.clip(work, PIXEL_MIN, PIXEL_MAX)).astype(np.uint8)
    )


def blank(width: int, height: int, value: int = 0) -> Image:
    return np.full((height, width, CHANNELS), value, dtype=np.uint8)
