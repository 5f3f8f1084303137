"""
Texture Jitter configuration and provenance types.
"""

import math
from dataclasses import dataclass, field

from django.db import models

from apps.core.exceptions import ConfigurationError, ParameterError
from apps.dataset.types import Rect


MAX_OPS = 2


class OpKind(models.TextChoices):
    GAUSSIAN = "gaussian", "Gaussian blur"
    DOWNSAMPLE = "downsample", "Down-sampling blur"
    MOTION = "motion", "Motion blur"
    SHARPEN = "sharpen", "Sharpen (reverse blur)"
    JPEG = "jpeg", "JPEG compression"
    DEBLOCK = "deblock", "Deblocking (reverse compression)"


@dataclass(frozen=True)
class IntensityParams:
    blur_sigma_range: tuple[float, float]
    jpeg_quality_range: tuple[int, int]
    sharpen_strength_range: tuple[float, float]
    feather_width: int
    downsample_factor_range: tuple[float, float] = (1.5, 2.0)
    motion_length_range: tuple[int, int] = (3, 5)
    deblock_strength_range: tuple[float, float] = (0.5, 1.0)

    def __post_init__(self):
        for name in (
            "blur_sigma_range",
            "jpeg_quality_range",
            "sharpen_strength_range",
            "downsample_factor_range",
            "motion_length_range",
            "deblock_strength_range",
        ):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigurationError(f"{name}: lower bound exceeds upper bound")
        if self.feather_width < 0:
            raise ConfigurationError("feather_width must be >= 0")


@dataclass(frozen=True)
class SizeBucket:
    max_scale: float  # math.inf for the catch-all bucket
    params: IntensityParams


@dataclass(frozen=True)
class JitterConfig:
    size_buckets: tuple[SizeBucket, ...]
    selection_prob: float = 0.5
    min_text_side: int = 8
    global_seed: int = 0
    max_attempts: int = 5
    mad_min: float = 1.0
    mad_max: float = 24.0

    def __post_init__(self):
        if not 0.0 <= self.selection_prob <= 1.0:
            raise ConfigurationError("selection_prob must be in [0, 1]")
        scales = [bucket.max_scale for bucket in self.size_buckets]
        if scales != sorted(scales):
            raise ConfigurationError("size_buckets must be sorted by max_scale ascending")
        if self.max_attempts < 1:
            raise ConfigurationError("max_attempts must be >= 1")


@dataclass(frozen=True)
class JitterOp:
    kind: str
    params: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"kind": str(self.kind), "params": dict(self.params)}


@dataclass(frozen=True)
class JitterRecipe:
    """
    Full provenance of one jittered instance: replaying it on the image it was drawn
    for reproduces the output bit-exactly.
    """

    instance_index: int
    ops: tuple[JitterOp, ...]
    feather_width: int
    seed: int
    region: Rect | None = None
    context: Rect | None = None
    image_id: str | None = None

    def __post_init__(self):
        if not 1 <= len(self.ops) <= MAX_OPS:
            raise ParameterError(f"a recipe holds 1 to {MAX_OPS} ops, got {len(self.ops)}")

    def as_dict(self) -> dict:
        return {
            "image_id": self.image_id,
            "instance_index": self.instance_index,
            "ops": [op.as_dict() for op in self.ops],
            "feather_width": self.feather_width,
            "seed": self.seed,
            "region": list(self.region) if self.region else None,
            "context": list(self.context) if self.context else None,
        }


@dataclass
class JitterOutcome:
    image_id: str
    jittered: int = 0
    skipped: list[int] = field(default_factory=list)
    recipes: list[JitterRecipe] = field(default_factory=list)


def is_catch_all(bucket: SizeBucket) -> bool:
    return math.isinf(bucket.max_scale)
