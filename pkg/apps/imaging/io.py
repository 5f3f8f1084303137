"""
Image file I/O. PNG is the only write format: texture signals must survive storage.
"""

import logging
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from apps.core.exceptions import CodecError
from apps.imaging.types import Image, ensure_image

logger = logging.getLogger(__name__)

READ_ERRORS = (OSError, ValueError, UnidentifiedImageError, PILImage.DecompressionBombError)


def load_image(path) -> Image:
    """
    Read any Pillow-readable image as RGB.

    Raises:
        CodecError: missing, unreadable or undecodable file.
    """
    try:
        with PILImage.open(path) as handle:
            return np.ascontiguousarray(np.asarray(handle.convert("RGB"), dtype=np.uint8))
    except READ_ERRORS as exc:
        raise CodecError(f"Cannot read image {path}: {exc}") from exc


def image_size(path) -> tuple[int, int]:
    """Return ``(width, height)`` without decoding pixel data."""
    try:
        with PILImage.open(path) as handle:
            return handle.size
    except READ_ERRORS as exc:
        raise CodecError(f"Cannot read image {path}: {exc}") from exc


def save_image(img: Image, path) -> Path:
    ensure_image(img)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        PILImage.fromarray(img).save(path, format="PNG", optimize=False, compress_level=6)
    except (OSError, ValueError) as exc:
        raise CodecError(f"Cannot write image {path}: {exc}") from exc
    logger.debug("Saved %dx%d image to %s", img.shape[1], img.shape[0], path)
    return path
