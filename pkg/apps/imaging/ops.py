"""
Deterministic low-level image operations.

Every operation is a pure function of its arguments: it validates, filters a float64
working copy with reflected borders and quantizes exactly once at the end.
"""

import io
import logging
import math
from functools import lru_cache

import cv2
import numpy as np
from django.conf import settings
from django.utils.module_loading import import_string
from PIL import Image as PILImage
from scipy import ndimage

from apps.core.constants import JPEG_BLOCK_SIZE
from apps.core.exceptions import CodecError, ParameterError
from apps.imaging.types import Image, KernelKind, KernelSpec, ensure_image, quantize, to_float

logger = logging.getLogger(__name__)

# Signed Laplacian sharpen; taps sum to 1 so flat regions are fixed points.
SHARPEN_KERNEL = np.array(
    [[0.0, -1.0, 0.0], [-1.0, 5.0, -1.0], [0.0, -1.0, 0.0]], dtype=np.float64
)

GAUSSIAN_TRUNCATE = 4.0


def _finite(name, value):
    if value is None or not math.isfinite(value):
        raise ParameterError(f"{name} must be finite")


def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian taps with radius ``int(4 * sigma + 0.5)``."""
    radius = int(GAUSSIAN_TRUNCATE * sigma + 0.5)
    if radius == 0:
        return np.ones(1, dtype=np.float64)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-0.5 * (x / sigma) ** 2)
    return taps / taps.sum()


def gaussian_blur(img: Image, sigma: float) -> Image:
    ensure_image(img)
    _finite("sigma", sigma)
    if sigma < 0:
        raise ParameterError("sigma must be >= 0")
    if sigma == 0:
        return img.copy()
    taps = gaussian_kernel1d(sigma)
    work = ndimage.correlate1d(to_float(img), taps, axis=0, mode="reflect")
    work = ndimage.correlate1d(work, taps, axis=1, mode="reflect")
    return quantize(work)


def resize_bilinear(img: Image, width: int, height: int) -> Image:
    """Half-pixel-centred bilinear resample with clamped edges."""
    ensure_image(img)
    if width < 1 or height < 1:
        raise ParameterError("target size must be >= 1")
    return quantize(_resize_float(to_float(img), width, height))


def _resize_float(work: np.ndarray, width: int, height: int) -> np.ndarray:
    if work.shape[1] == width and work.shape[0] == height:
        return work.copy()
    return cv2.resize(work, (width, height), interpolation=cv2.INTER_LINEAR)


def downsample_blur(img: Image, factor: float) -> Image:
    ensure_image(img)
    _finite("factor", factor)
    if factor <= 1:
        raise ParameterError("factor must be > 1")
    height, width = img.shape[:2]
    small_w = max(1, math.ceil(width / factor))
    small_h = max(1, math.ceil(height / factor))
    work = _resize_float(to_float(img), small_w, small_h)
    return quantize(_resize_float(work, width, height))


def motion_kernel(length: int, angle: float) -> np.ndarray:
    """
    Rasterize a centred line of ``length`` samples at ``angle`` degrees (counter-clockwise
    from the +x axis) into an odd-sized square kernel whose taps sum to 1.
    """
    if length < 1:
        raise ParameterError("length must be >= 1")
    _finite("angle", angle)
    half = math.ceil((length - 1) / 2)
    size = 2 * half + 1
    kernel = np.zeros((size, size), dtype=np.float64)
    theta = math.radians(angle)
    for t in np.linspace(-(length - 1) / 2, (length - 1) / 2, length):
        col = math.floor(half + t * math.cos(theta) + 0.5)
        row = math.floor(half - t * math.sin(theta) + 0.5)
        kernel[min(max(row, 0), size - 1), min(max(col, 0), size - 1)] = 1.0
    return kernel / kernel.sum()


def motion_blur(img: Image, length: int, angle: float) -> Image:
    ensure_image(img)
    kernel = motion_kernel(int(length), angle)
    if kernel.size == 1:
        return img.copy()
    work = ndimage.correlate(to_float(img), kernel[:, :, None], mode="reflect")
    return quantize(work)


def sharpen(img: Image, strength: float) -> Image:
    ensure_image(img)
    _finite("strength", strength)
    if not 0.0 <= strength <= 1.0:
        raise ParameterError("strength must be in [0, 1]")
    if strength == 0:
        return img.copy()
    work = to_float(img)
    filtered = ndimage.correlate(work, SHARPEN_KERNEL[:, :, None], mode="reflect")
    return quantize((1.0 - strength) * work + strength * filtered)


def jpeg_roundtrip(img: Image, quality: int) -> Image:
    """Baseline JPEG encode/decode with 4:4:4 chroma through Pillow."""
    ensure_image(img)
    if not 1 <= int(quality) <= 100:
        raise ParameterError("quality must be in [1, 100]")
    buffer = io.BytesIO()
    try:
        PILImage.fromarray(img).save(
            buffer, format="JPEG", quality=int(quality), subsampling=0, optimize=False
        )
        buffer.seek(0)
        with PILImage.open(buffer) as decoded:
            out = np.asarray(decoded.convert("RGB"), dtype=np.uint8)
    except (OSError, ValueError) as exc:
        raise CodecError(f"JPEG round-trip failed: {exc}") from exc
    if out.shape != img.shape:
        raise CodecError(f"JPEG round-trip changed shape {img.shape} -> {out.shape}")
    return np.ascontiguousarray(out)


def _deblock_axis(work: np.ndarray, strength: float, axis: int) -> np.ndarray:
    view = np.moveaxis(work, axis, 0)
    n = view.shape[0]
    q = np.arange(JPEG_BLOCK_SIZE, n, JPEG_BLOCK_SIZE)
    if q.size == 0:
        return work
    p = q - 1
    before = np.maximum(p - 1, 0)
    after = np.minimum(q + 1, n - 1)

    out = view.copy()
    smooth_p = (view[before] + 2.0 * view[p] + view[q]) / 4.0
    smooth_q = (view[p] + 2.0 * view[q] + view[after]) / 4.0
    out[p] = (1.0 - strength) * view[p] + strength * smooth_p
    out[q] = (1.0 - strength) * view[q] + strength * smooth_q
    return np.moveaxis(out, 0, axis)


def block_boundary_deblock(img: Image, strength: float) -> Image:
    """
    Classical reverse-compression filter: only the pixel pair straddling each 8x8 block
    boundary is touched, replaced by a strength-weighted [1, 2, 1] smoothing across the
    boundary. Vertical boundaries first, then horizontal.
    """
    work = _deblock_axis(to_float(img), strength, axis=1)
    work = _deblock_axis(work, strength, axis=0)
    return quantize(work)


@lru_cache(maxsize=None)
def _resolve_deblocker(path: str):
    return import_string(path)


def get_deblocker():
    return _resolve_deblocker(settings.IMAGING_DEBLOCKER)


def deblock(img: Image, strength: float) -> Image:
    ensure_image(img)
    _finite("strength", strength)
    if not 0.0 <= strength <= 1.0:
        raise ParameterError("strength must be in [0, 1]")
    if strength == 0:
        return img.copy()
    out = get_deblocker()(img, strength)
    if out.shape != img.shape:
        raise CodecError("deblocker changed the image shape")
    return out


def apply_kernel_spec(img: Image, spec: KernelSpec) -> Image:
    match spec.kind:
        case KernelKind.GAUSSIAN:
            return gaussian_blur(img, spec.sigma)
        case KernelKind.DOWNSAMPLE:
            return downsample_blur(img, spec.factor)
        case KernelKind.MOTION:
            return motion_blur(img, spec.length, spec.angle)
        case KernelKind.SHARPEN:
            return sharpen(img, spec.strength)
    raise ParameterError(f"Unknown kernel kind {spec.kind!r}")


def mean_abs_diff(a: Image, b: Image) -> float:
    """Mean absolute difference on the 0-255 scale."""
    if a.shape != b.shape:
        raise ParameterError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.mean(np.abs(a.astype(np.int16) - b.astype(np.int16))))
