"""
Texture Jitter engine.

Selected text regions get one or two subtle texture operations (blur, reverse blur,
compression, reverse compression) with an intensity chosen from the text size, and are
spliced back in place with a feathered edge. Every random draw comes from a generator
seeded by (global seed, image id), so output does not depend on worker scheduling.
"""

import logging
import math

import numpy as np

from apps.core.exceptions import ConfigurationError, ParameterError
from apps.core.rng import draw_seed, generator_for
from apps.dataset.types import Label, Rect, TextInstance
from apps.imaging import ops
from apps.imaging.types import Image, ensure_image, quantize, to_float
from apps.jitter.types import (
    IntensityParams,
    JitterConfig,
    JitterOp,
    JitterOutcome,
    JitterRecipe,
    OpKind,
)

logger = logging.getLogger(__name__)

OP_FAMILIES = tuple(OpKind.values)

SINGLE_OP_PROB = 0.7

OP_HANDLERS = {
    OpKind.GAUSSIAN: lambda img, p: ops.gaussian_blur(img, p["sigma"]),
    OpKind.DOWNSAMPLE: lambda img, p: ops.downsample_blur(img, p["factor"]),
    OpKind.MOTION: lambda img, p: ops.motion_blur(img, int(p["length"]), p["angle"]),
    OpKind.SHARPEN: lambda img, p: ops.sharpen(img, p["strength"]),
    OpKind.JPEG: lambda img, p: ops.jpeg_roundtrip(img, int(p["quality"])),
    OpKind.DEBLOCK: lambda img, p: ops.deblock(img, p["strength"]),
}


def select_targets(
    instances: list[TextInstance], config: JitterConfig, rng: np.random.Generator
) -> list[int]:
    """
    Independently pick eligible instances (authentic, not don't-care, shorter side >=
    min_text_side) with probability ``selection_prob``.

    One uniform is drawn per instance whether or not it is eligible, so one instance's
    eligibility never shifts another's draw.
    """
    selected = []
    for index, instance in enumerate(instances):
        draw = rng.random()
        box = instance.bbox
        if instance.label != Label.AUTHENTIC or instance.ignore:
            continue
        if min(box.w, box.h) < config.min_text_side:
            continue
        if draw < config.selection_prob:
            selected.append(index)
    return selected


def compute_intensity(text_w: float, text_h: float, config: JitterConfig) -> IntensityParams:
    """First bucket with ``sqrt(text_w * text_h) < max_scale``, else the last."""
    if not config.size_buckets:
        raise ConfigurationError("jitter config has no size buckets")
    if text_w < 1 or text_h < 1:
        raise ParameterError("text width and height must be >= 1")
    scale = math.sqrt(text_w * text_h)
    for bucket in config.size_buckets:
        if scale < bucket.max_scale:
            return bucket.params
    return config.size_buckets[-1].params


def _uniform(rng, bounds) -> float:
    lo, hi = bounds
    return float(rng.uniform(lo, hi)) if hi > lo else float(lo)


def _integer(rng, bounds) -> int:
    lo, hi = bounds
    return int(rng.integers(lo, hi + 1))


def _draw_params(kind: str, params: IntensityParams, rng: np.random.Generator) -> dict:
    match kind:
        case OpKind.GAUSSIAN:
            return {"sigma": _uniform(rng, params.blur_sigma_range)}
        case OpKind.DOWNSAMPLE:
            return {"factor": _uniform(rng, params.downsample_factor_range)}
        case OpKind.MOTION:
            return {
                "length": _integer(rng, params.motion_length_range),
                "angle": float(rng.uniform(0.0, 180.0)),
            }
        case OpKind.SHARPEN:
            return {"strength": _uniform(rng, params.sharpen_strength_range)}
        case OpKind.JPEG:
            return {"quality": _integer(rng, params.jpeg_quality_range)}
        case OpKind.DEBLOCK:
            return {"strength": _uniform(rng, params.deblock_strength_range)}
    raise ParameterError(f"Unknown op kind {kind!r}")


def draw_recipe(
    instance_index: int,
    params: IntensityParams,
    feather_width: int,
    seed: int,
    region: Rect | None = None,
    context: Rect | None = None,
    image_id: str | None = None,
) -> JitterRecipe:
    """
    One op with probability 0.7, otherwise two distinct ops in drawn order. All draws come
    from ``seed`` alone.
    """
    rng = np.random.default_rng(seed)
    count = 1 if rng.random() < SINGLE_OP_PROB else 2
    kinds = [OP_FAMILIES[i] for i in rng.choice(len(OP_FAMILIES), size=count, replace=False)]
    drawn = tuple(JitterOp(kind=kind, params=_draw_params(kind, params, rng)) for kind in kinds)
    return JitterRecipe(
        instance_index=instance_index,
        ops=drawn,
        feather_width=feather_width,
        seed=seed,
        region=region,
        context=context,
        image_id=image_id,
    )


def apply_jitter(crop: Image, recipe: JitterRecipe) -> Image:
    ensure_image(crop)
    out = crop
    for op in recipe.ops:
        handler = OP_HANDLERS.get(op.kind)
        if handler is None:
            raise ParameterError(f"Unknown op kind {op.kind!r}")
        out = handler(out, op.params)
    return out if out is not crop else crop.copy()


def feather_alpha(height: int, width: int, feather_width: int) -> np.ndarray:
    """
    Alpha is 1 on the region eroded by ``feather_width`` and ramps linearly towards the
    border: a pixel ``d`` steps inside the border gets ``(d + 1) / (feather_width + 1)``.
    """
    dy = np.minimum(np.arange(height), np.arange(height)[::-1])
    dx = np.minimum(np.arange(width), np.arange(width)[::-1])
    depth = np.minimum.outer(dy, dx).astype(np.float64)
    return np.minimum(1.0, (depth + 1.0) / (feather_width + 1.0))


def feather_splice(img: Image, region: Rect, patch: Image, feather_width: int) -> Image:
    ensure_image(img)
    ensure_image(patch)
    height, width = img.shape[:2]
    if (
        region.w < 1
        or region.h < 1
        or region.x < 0
        or region.y < 0
        or region.x + region.w > width
        or region.y + region.h > height
    ):
        raise ParameterError(f"region {tuple(region)} outside {width}x{height} image")
    if patch.shape[:2] != (region.h, region.w):
        raise ParameterError(f"patch shape {patch.shape[:2]} != region {(region.h, region.w)}")
    if feather_width < 0:
        raise ParameterError("feather_width must be >= 0")

    out = img.copy()
    alpha = feather_alpha(region.h, region.w, feather_width)[:, :, None]
    under = to_float(out[region.slices])
    out[region.slices] = quantize(alpha * to_float(patch) + (1.0 - alpha) * under)
    return out


def splice_recipe(img: Image, recipe: JitterRecipe) -> Image:
    """Jitter the recipe's context crop and feather its region back into ``img``."""
    if recipe.region is None or recipe.context is None:
        raise ParameterError("recipe has no region/context geometry")
    jittered = apply_jitter(img[recipe.context.slices], recipe)
    patch = jittered[recipe.region.relative_to(recipe.context).slices]
    return feather_splice(img, recipe.region, patch, recipe.feather_width)


def replay_recipes(img: Image, recipes: list[JitterRecipe]) -> Image:
    ensure_image(img)
    out = img
    for recipe in recipes:
        out = splice_recipe(out, recipe)
    return out.copy() if out is img else out


def jitter_image(
    img: Image,
    instances: list[TextInstance],
    config: JitterConfig,
    image_id: str,
    report: JitterOutcome | None = None,
) -> tuple[Image, list[TextInstance], list[JitterRecipe]]:
    """
    Jitter one image.

    Returns:
        (output image, output annotations with jittered instances relabelled tampered,
        recipes in application order). Instances whose retry budget runs out keep their
        label and are listed in ``report.skipped``.
    """
    ensure_image(img)
    height, width = img.shape[:2]
    rng = generator_for(config.global_seed, image_id)
    report = report if report is not None else JitterOutcome(image_id=image_id)

    working = img
    labels = list(instances)
    for index in select_targets(instances, config, rng):
        region = instances[index].pixel_rect(width, height)
        if region.w < 1 or region.h < 1:
            logger.warning("%s: instance %d lies outside the image; skipped", image_id, index)
            report.skipped.append(index)
            continue

        params = compute_intensity(region.w, region.h, config)
        feather = params.feather_width
        limit = min(region.w, region.h) // 2
        if feather > limit:
            logger.warning(
                "%s: instance %d feather width %d clamped to %d", image_id, index, feather, limit
            )
            feather = limit
        context = region.expanded(feather, width, height)
        source = working[region.slices]

        accepted = None
        for attempt in range(config.max_attempts):
            recipe = draw_recipe(
                index, params, feather, draw_seed(rng), region, context, image_id
            )
            candidate = splice_recipe(working, recipe)
            mad = ops.mean_abs_diff(source, candidate[region.slices])
            if config.mad_min <= mad <= config.mad_max:
                accepted = (recipe, candidate)
                break
            logger.debug(
                "%s: instance %d attempt %d rejected (MAD %.3f)", image_id, index, attempt, mad
            )

        if accepted is None:
            logger.warning(
                "%s: instance %d skipped after %d attempts", image_id, index, config.max_attempts
            )
            report.skipped.append(index)
            continue

        recipe, working = accepted
        labels[index] = instances[index].relabeled(Label.TAMPERED)
        report.recipes.append(recipe)
        report.jittered += 1

    return (working.copy() if working is img else working), labels, list(report.recipes)
