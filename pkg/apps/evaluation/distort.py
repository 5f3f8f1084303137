"""
Robustness distortions applied to test images, and the matching ground-truth transform.
"""

import math

from apps.core.exceptions import ParameterError
from apps.dataset.types import ManifestRecord
from apps.evaluation.types import Distortion
from apps.imaging.ops import jpeg_roundtrip, resize_bilinear
from apps.imaging.types import Image, ensure_image

JPEG_QUALITY = 75


def half_size(width: int, height: int) -> tuple[int, int]:
    return math.ceil(width / 2), math.ceil(height / 2)


def distort(img: Image, kind: str) -> Image:
    ensure_image(img)
    match kind:
        case Distortion.NONE:
            return img.copy()
        case Distortion.JPEG75:
            return jpeg_roundtrip(img, JPEG_QUALITY)
        case Distortion.RESIZE_HALF:
            height, width = img.shape[:2]
            return resize_bilinear(img, *half_size(width, height))
    raise ParameterError(f"Unknown distortion {kind!r}")


def distort_record(record: ManifestRecord, kind: str) -> ManifestRecord:
    """Ground truth for a distorted image: geometry follows the resize, labels are kept."""
    if kind != Distortion.RESIZE_HALF:
        return record
    width, height = half_size(record.width, record.height)
    sx = width / record.width
    sy = height / record.height
    return ManifestRecord(
        image=record.image,
        width=width,
        height=height,
        instances=tuple(instance.scaled(sx, sy) for instance in record.instances),
    )
