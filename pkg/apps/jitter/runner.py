"""
Batch Texture Jitter over a manifest.

Images are independent, so they are fanned out to a thread pool; results are collected
in manifest order and every random draw is keyed by (global seed, image id), which makes
the written output identical for any thread count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from apps.core.exceptions import RecordError, ToolkitError
from apps.core.jsonl import read_jsonl, write_jsonl
from apps.core.serializers import validate_payload
from apps.dataset.manifest import save_manifest
from apps.dataset.types import Manifest, ManifestRecord
from apps.imaging.io import load_image, save_image
from apps.jitter.engine import jitter_image, replay_recipes
from apps.jitter.serializers import JitterRecipeSerializer
from apps.jitter.types import JitterConfig, JitterOutcome, JitterRecipe

logger = logging.getLogger(__name__)

IMAGES_DIR = "images"
MANIFEST_NAME = "manifest.jsonl"
RECIPES_NAME = "recipes.jsonl"


@dataclass
class ImageResult:
    source: ManifestRecord
    record: ManifestRecord | None = None
    outcome: JitterOutcome | None = None
    error: str | None = None


@dataclass
class BatchSummary:
    images: int = 0
    instances_jittered: int = 0
    instances_skipped: int = 0
    failures: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "images": self.images,
            "instances_jittered": self.instances_jittered,
            "instances_skipped": self.instances_skipped,
            "failures": self.failures,
        }


def output_name(image: str) -> str:
    """
    Output PNG path for an image id: PNG ids are kept, any other id gets ``.png``
    appended (``a.jpg`` -> ``a.jpg.png``) so sources differing only by extension stay apart.
    """
    if Path(image).suffix.lower() == ".png":
        return Path(image).as_posix()
    return f"{Path(image).as_posix()}.png"


def check_output_names(manifest: Manifest) -> None:
    """
    Raises:
        RecordError: two manifest records would be written to the same output file.
    """
    claimed: dict[str, str] = {}
    clashes = []
    for record in manifest.records:
        name = output_name(record.image)
        if name in claimed:
            clashes.append(f"{claimed[name]} and {record.image} -> {name}")
        else:
            claimed[name] = record.image
    if clashes:
        raise RecordError(f"output name collision: {'; '.join(clashes)}")


def _jitter_one(record: ManifestRecord, images_dir: Path, out_dir: Path, config: JitterConfig):
    try:
        img = load_image(images_dir / record.image)
        if img.shape[:2] != (record.height, record.width):
            raise RecordError(
                f"{record.image}: manifest says {record.width}x{record.height}, "
                f"file is {img.shape[1]}x{img.shape[0]}"
            )
        outcome = JitterOutcome(image_id=record.image)
        out_img, labels, _ = jitter_image(
            img, list(record.instances), config, record.image, report=outcome
        )
        relative = f"{IMAGES_DIR}/{output_name(record.image)}"
        save_image(out_img, out_dir / relative)
    except ToolkitError as exc:
        logger.error("Failed to jitter %s: %s", record.image, exc)
        return ImageResult(source=record, error=str(exc))
    except Exception as exc:
        # Per-image failures are reported in the summary, never raised.
        logger.exception("Unexpected error while jittering %s", record.image)
        return ImageResult(source=record, error=f"{type(exc).__name__}: {exc}")

    jittered = ManifestRecord(
        image=relative, width=record.width, height=record.height, instances=tuple(labels)
    )
    return ImageResult(source=record, record=jittered, outcome=outcome)


def run_jitter_batch(
    manifest: Manifest,
    images_dir,
    out_dir,
    config: JitterConfig,
    threads: int = 1,
) -> BatchSummary:
    """
    Jitter every image in ``manifest`` and write ``images/``, ``manifest.jsonl`` and
    ``recipes.jsonl`` under ``out_dir``. Images that fail for any reason are reported in the
    summary and left out of the output manifest.
    """
    images_dir = Path(images_dir)
    out_dir = Path(out_dir)
    check_output_names(manifest)
    out_dir.mkdir(parents=True, exist_ok=True)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(
            pool.map(
                lambda record: _jitter_one(record, images_dir, out_dir, config),
                manifest.records,
            )
        )

    summary = BatchSummary()
    records = []
    recipes = []
    for result in results:
        if result.error is not None:
            summary.failures.append({"image": result.source.image, "error": result.error})
            continue
        summary.images += 1
        summary.instances_jittered += result.outcome.jittered
        summary.instances_skipped += len(result.outcome.skipped)
        records.append(result.record)
        recipes.extend(result.outcome.recipes)

    metadata = dict(manifest.metadata)
    metadata.update({"jitter_seed": config.global_seed, "source_images": str(images_dir)})
    save_manifest(Manifest(records=records, metadata=metadata), out_dir / MANIFEST_NAME)
    write_jsonl(out_dir / RECIPES_NAME, (recipe.as_dict() for recipe in recipes))

    logger.info(
        "Jittered %d instance(s) across %d image(s); %d skipped, %d failed",
        summary.instances_jittered,
        summary.images,
        summary.instances_skipped,
        len(summary.failures),
    )
    return summary


def load_recipes(path) -> list[JitterRecipe]:
    return [
        validate_payload(JitterRecipeSerializer, payload, f"{path}:{line_no}")
        for line_no, payload in read_jsonl(path)
    ]


def replay_batch(manifest: Manifest, images_dir, recipes_path, out_dir) -> dict:
    """
    Re-apply stored recipes to the source images and write the results under
    ``out_dir/images``. Returns ``{"images": n, "recipes": m}``.
    """
    images_dir = Path(images_dir)
    out_dir = Path(out_dir)
    by_image: dict[str, list[JitterRecipe]] = {}
    for recipe in load_recipes(recipes_path):
        by_image.setdefault(recipe.image_id, []).append(recipe)

    check_output_names(manifest)
    known = manifest.by_image()
    unknown = sorted(set(by_image) - set(known), key=str)
    if unknown:
        raise RecordError(f"recipes reference images missing from the manifest: {unknown}")

    count = 0
    for record in manifest.records:
        img = load_image(images_dir / record.image)
        out = replay_recipes(img, by_image.get(record.image, []))
        save_image(out, out_dir / IMAGES_DIR / output_name(record.image))
        count += 1
    applied = sum(len(items) for items in by_image.values())
    logger.info("Replayed %d recipe(s) over %d image(s)", applied, count)
    return {"images": count, "recipes": applied}
