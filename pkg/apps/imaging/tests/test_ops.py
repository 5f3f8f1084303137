import math

import numpy as np
import pytest

from apps.core.exceptions import ParameterError
from apps.imaging import ops
from apps.imaging.types import KernelKind, KernelSpec, blank


def direct_correlate(img, kernel):
    """Brute-force 2-D correlation with symmetric (half-sample) border reflection."""
    work = img.astype(np.float64)
    pad_y, pad_x = kernel.shape[0] // 2, kernel.shape[1] // 2
    padded = np.pad(work, ((pad_y, pad_y), (pad_x, pad_x), (0, 0)), mode="symmetric")
    height, width = img.shape[:2]
    out = np.zeros_like(work)
    for dy in range(kernel.shape[0]):
        for dx in range(kernel.shape[1]):
            out += kernel[dy, dx] * padded[dy : dy + height, dx : dx + width]
    return out


def to_uint8(work):
    return np.rint(np.clip(work, 0, 255)).astype(np.uint8)


def max_lsb_diff(a, b):
    return int(np.max(np.abs(a.astype(np.int16) - b.astype(np.int16))))


def random_image(seed, low=16, high=33):
    rng = np.random.default_rng(seed)
    height, width = (int(v) for v in rng.integers(low, high, size=2))
    return rng, rng.integers(0, 256, (height, width, 3), dtype=np.uint8)


def noisy_gradient(seed):
    rng = np.random.default_rng(seed)
    height, width = (int(v) for v in rng.integers(24, 65, size=2))
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    base = rng.uniform(40, 120) + rng.uniform(0.5, 2.0) * xx[..., None] + yy[..., None]
    noisy = base + rng.normal(0.0, rng.uniform(4.0, 16.0), (height, width, 3))
    return np.rint(np.clip(noisy, 0, 255)).astype(np.uint8)


def psnr(a, b):
    mse = np.mean((a.astype(np.float64) - b.astype(np.float64)) ** 2)
    return math.inf if mse == 0 else 10.0 * math.log10(255.0**2 / mse)


@pytest.mark.parametrize("seed", range(50))
def test_gaussian_blur_matches_direct_convolution(seed):
    rng, img = random_image(seed)
    sigma = float(rng.uniform(0.3, 1.5))
    taps = ops.gaussian_kernel1d(sigma)
    expected = to_uint8(direct_correlate(img, np.outer(taps, taps)))
    assert max_lsb_diff(ops.gaussian_blur(img, sigma), expected) <= 1


@pytest.mark.parametrize("seed", range(50))
def test_motion_blur_matches_direct_convolution(seed):
    rng, img = random_image(seed)
    length = int(rng.integers(2, 8))
    angle = float(rng.uniform(0, 180))
    expected = to_uint8(direct_correlate(img, ops.motion_kernel(length, angle)))
    assert max_lsb_diff(ops.motion_blur(img, length, angle), expected) <= 1


@pytest.mark.parametrize("seed", range(50))
def test_sharpen_matches_direct_convolution(seed):
    rng, img = random_image(seed)
    strength = float(rng.uniform(0.05, 1.0))
    filtered = direct_correlate(img, ops.SHARPEN_KERNEL)
    expected = to_uint8((1 - strength) * img.astype(np.float64) + strength * filtered)
    assert max_lsb_diff(ops.sharpen(img, strength), expected) <= 1


def test_gaussian_impulse_centre_value():
    img = blank(5, 5)
    img[2, 2] = 255
    out = ops.gaussian_blur(img, 1.0)

    g0 = 1.0 / sum(math.exp(-0.5 * k * k) for k in range(-4, 5))
    assert out[2, 2, 0] == round(255 * g0 * g0) == 41
    assert np.all(out[..., 0] == out[..., 1])


def test_gaussian_kernel_radius_and_normalisation():
    taps = ops.gaussian_kernel1d(1.0)
    assert taps.size == 9
    assert taps.sum() == pytest.approx(1.0)
    assert ops.gaussian_kernel1d(0.1).size == 1


def test_zero_strength_ops_are_identity(textured_image):
    assert np.array_equal(ops.gaussian_blur(textured_image, 0), textured_image)
    assert np.array_equal(ops.sharpen(textured_image, 0), textured_image)
    assert np.array_equal(ops.deblock(textured_image, 0), textured_image)
    assert np.array_equal(ops.motion_blur(textured_image, 1, 30.0), textured_image)


def test_flat_image_is_fixed_point_of_filters():
    img = blank(20, 12, 137)
    assert np.array_equal(ops.gaussian_blur(img, 1.3), img)
    assert np.array_equal(ops.sharpen(img, 1.0), img)
    assert np.array_equal(ops.motion_blur(img, 5, 45.0), img)
    assert np.array_equal(ops.downsample_blur(img, 2.0), img)


@pytest.mark.parametrize(
    "angle, expected_row, expected_col",
    [(0.0, [2], [0, 1, 2, 3, 4]), (90.0, [0, 1, 2, 3, 4], [2])],
)
def test_motion_kernel_axis_aligned(angle, expected_row, expected_col):
    kernel = ops.motion_kernel(5, angle)
    rows, cols = np.nonzero(kernel)
    assert kernel.shape == (5, 5)
    assert sorted(set(rows.tolist())) == expected_row
    assert sorted(set(cols.tolist())) == expected_col
    assert kernel.sum() == pytest.approx(1.0)


def test_motion_kernel_even_length_is_odd_sized():
    kernel = ops.motion_kernel(4, 0.0)
    assert kernel.shape == (5, 5)
    assert np.count_nonzero(kernel) == 4


def test_resize_checkerboard_halves_to_mean_gray():
    checker = ((np.indices((8, 8)).sum(axis=0) % 2) * 255).astype(np.uint8)
    img = np.repeat(checker[..., None], 3, axis=2)
    out = ops.resize_bilinear(img, 4, 4)
    assert out.shape == (4, 4, 3)
    assert np.all(out == 128)


def bilinear_reference(img, width, height):
    src_h, src_w = img.shape[:2]
    work = img.astype(np.float64)

    def axis(n_out, n_in):
        pos = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        pos = np.clip(pos, 0, n_in - 1)
        lo = np.floor(pos).astype(int)
        hi = np.minimum(lo + 1, n_in - 1)
        return lo, hi, pos - lo

    y0, y1, fy = axis(height, src_h)
    x0, x1, fx = axis(width, src_w)
    top = work[y0][:, x0] * (1 - fx)[None, :, None] + work[y0][:, x1] * fx[None, :, None]
    bottom = work[y1][:, x0] * (1 - fx)[None, :, None] + work[y1][:, x1] * fx[None, :, None]
    return to_uint8(top * (1 - fy)[:, None, None] + bottom * fy[:, None, None])


@pytest.mark.parametrize("size", [(10, 7), (33, 21), (5, 5), (48, 30)])
def test_resize_matches_half_pixel_bilinear(textured_image, size):
    width, height = size
    out = ops.resize_bilinear(textured_image, width, height)
    assert out.shape == (height, width, 3)
    assert max_lsb_diff(out, bilinear_reference(textured_image, width, height)) <= 1


def test_downsample_blur_keeps_size_and_softens(textured_image):
    out = ops.downsample_blur(textured_image, 2.0)
    assert out.shape == textured_image.shape
    assert np.std(np.diff(out.astype(float), axis=1)) < np.std(
        np.diff(textured_image.astype(float), axis=1)
    )


@pytest.mark.parametrize("seed", range(10))
def test_downsample_blur_near_unit_factor_is_within_one_lsb(seed):
    _, img = random_image(seed)
    for factor in (1.0001, 1.001, 1.01):
        assert max_lsb_diff(ops.downsample_blur(img, factor), img) <= 1


@pytest.mark.parametrize("seed", range(10))
def test_jpeg_quality_100_keeps_psnr_above_40db(seed):
    img = noisy_gradient(seed)
    assert psnr(ops.jpeg_roundtrip(img, 100), img) >= 40.0


@pytest.mark.parametrize("seed", range(10))
def test_repeated_low_quality_jpeg_changes_less_each_pass(seed):
    img = noisy_gradient(seed)
    once = ops.jpeg_roundtrip(img, 10)
    twice = ops.jpeg_roundtrip(once, 10)
    assert ops.mean_abs_diff(once, twice) < ops.mean_abs_diff(img, once)


def test_jpeg_roundtrip_on_constant_image_is_nearly_lossless():
    img = blank(40, 24, 90)
    img[..., 1] = 160
    out = ops.jpeg_roundtrip(img, 75)
    assert out.shape == img.shape
    assert ops.mean_abs_diff(img, out) <= 1.0


def test_jpeg_roundtrip_is_deterministic(textured_image):
    first = ops.jpeg_roundtrip(textured_image, 40)
    second = ops.jpeg_roundtrip(textured_image, 40)
    assert np.array_equal(first, second)
    assert ops.mean_abs_diff(textured_image, first) > 0


def test_deblock_smooths_block_boundary_step():
    img = blank(16, 16, 100)
    img[:, 8:] = 120
    out = ops.block_boundary_deblock(img, 1.0)
    assert out[0, 7, 0] == 105
    assert out[0, 8, 0] == 115
    untouched = [c for c in range(16) if c not in (7, 8)]
    assert np.array_equal(out[:, untouched], img[:, untouched])


def test_deblock_leaves_single_block_alone(rng):
    img = rng.integers(0, 256, (8, 8, 3), dtype=np.uint8)
    assert np.array_equal(ops.block_boundary_deblock(img, 1.0), img)


def halve_deblocker(img, strength):
    return (img // 2).astype(np.uint8)


def test_deblock_uses_configured_deblocker(settings, textured_image):
    settings.IMAGING_DEBLOCKER = "apps.imaging.tests.test_ops.halve_deblocker"
    out = ops.deblock(textured_image, 0.5)
    assert np.array_equal(out, textured_image // 2)


@pytest.mark.parametrize(
    "call",
    [
        lambda img: ops.gaussian_blur(img, -1.0),
        lambda img: ops.gaussian_blur(img, float("nan")),
        lambda img: ops.downsample_blur(img, 1.0),
        lambda img: ops.motion_blur(img, 0, 0.0),
        lambda img: ops.sharpen(img, 1.5),
        lambda img: ops.jpeg_roundtrip(img, 0),
        lambda img: ops.deblock(img, -0.1),
        lambda img: ops.resize_bilinear(img, 0, 4),
    ],
)
def test_out_of_range_parameters_raise(textured_image, call):
    with pytest.raises(ParameterError):
        call(textured_image)


def test_invalid_image_rejected():
    with pytest.raises(ParameterError):
        ops.gaussian_blur(np.zeros((4, 4), dtype=np.uint8), 1.0)
    with pytest.raises(ParameterError):
        ops.sharpen(np.zeros((4, 4, 3), dtype=np.float32), 0.5)


@pytest.mark.parametrize(
    "spec, direct",
    [
        (KernelSpec(KernelKind.GAUSSIAN, sigma=1.1), lambda img: ops.gaussian_blur(img, 1.1)),
        (KernelSpec(KernelKind.DOWNSAMPLE, factor=1.7), lambda img: ops.downsample_blur(img, 1.7)),
        (
            KernelSpec(KernelKind.MOTION, length=4, angle=30.0),
            lambda img: ops.motion_blur(img, 4, 30.0),
        ),
        (KernelSpec(KernelKind.SHARPEN, strength=0.6), lambda img: ops.sharpen(img, 0.6)),
    ],
)
def test_apply_kernel_spec_dispatches(textured_image, spec, direct):
    assert np.array_equal(ops.apply_kernel_spec(textured_image, spec), direct(textured_image))


def test_kernel_spec_validation():
    with pytest.raises(ParameterError):
        KernelSpec("box")
    with pytest.raises(ParameterError):
        KernelSpec(KernelKind.DOWNSAMPLE, factor=0.5)


def test_mean_abs_diff_shape_mismatch():
    with pytest.raises(ParameterError):
        ops.mean_abs_diff(blank(4, 4), blank(5, 4))
    assert ops.mean_abs_diff(blank(4, 4, 10), blank(4, 4, 13)) == 3.0
