"""
Synthetic scene-text samples for development and tests.

Each scene is a shaded, noisy background with a few light text plates carrying dark
glyph-like strokes. The noise gives every op family something to change, so jitter runs
on samples behave like runs on photographs.
"""

import logging
from pathlib import Path

import numpy as np

from apps.core.rng import generator_for
from apps.dataset.manifest import save_manifest
from apps.dataset.types import Box, Label, Manifest, ManifestRecord, TextInstance
from apps.imaging.io import save_image
from apps.imaging.types import Image, quantize

logger = logging.getLogger(__name__)

GLYPHS = "ABCDEFGHJKLMNPRSTUVWXYZ0123456789"


def _draw_strokes(img, rng, x, y, w, h):
    ink = rng.uniform(10, 70, 3)
    stroke = max(1, h // 6)
    margin = max(1, h // 5)
    cursor = x + stroke
    while cursor + stroke < x + w - stroke:
        glyph_w = int(rng.integers(stroke, 3 * stroke + 1))
        right = min(cursor + glyph_w, x + w - stroke)
        img[y + margin : y + h - margin, cursor : cursor + stroke] = ink
        img[y + margin : y + margin + stroke, cursor:right] = ink
        if rng.random() < 0.5:
            img[y + h - margin - stroke : y + h - margin, cursor:right] = ink
        cursor = right + stroke + 1


def synthetic_scene(
    rng: np.random.Generator, width: int = 256, height: int = 192, texts: int = 6
) -> tuple[Image, list[TextInstance]]:
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    tint = rng.uniform(0.6, 1.0, 3)
    base = 70.0 + 90.0 * (xx / width)[..., None] * tint + 40.0 * (yy / height)[..., None]
    img = base + rng.normal(0.0, 6.0, (height, width, 3))

    instances = []
    for _ in range(texts):
        w = int(rng.integers(16, max(17, width // 2)))
        h = int(rng.integers(10, max(11, height // 4)))
        w, h = min(w, width), min(h, height)
        x = int(rng.integers(0, width - w + 1))
        y = int(rng.integers(0, height - h + 1))
        plate = rng.uniform(170, 245, 3)
        img[y : y + h, x : x + w] = plate + rng.normal(0.0, 4.0, (h, w, 3))
        _draw_strokes(img, rng, x, y, w, h)
        word = "".join(rng.choice(list(GLYPHS), size=int(rng.integers(2, 9))))
        instances.append(
            TextInstance(label=Label.AUTHENTIC, box=Box(x, y, w, h), transcription=word)
        )
    return quantize(img), instances


def write_sample_dataset(
    out_dir,
    count: int = 8,
    seed: int = 0,
    width: int = 256,
    height: int = 192,
    texts: int = 6,
) -> Manifest:
    """
    Write ``images/sample_NNN.png`` and ``manifest.jsonl`` under ``out_dir``; manifest
    image paths are relative to ``images/``.
    """
    out_dir = Path(out_dir)
    records = []
    for index in range(count):
        name = f"sample_{index:03d}.png"
        img, instances = synthetic_scene(generator_for(seed, name), width, height, texts)
        save_image(img, out_dir / "images" / name)
        records.append(ManifestRecord(name, width, height, tuple(instances)))
    manifest = Manifest(records=records, metadata={"source": "synthetic", "seed": seed})
    save_manifest(manifest, out_dir / "manifest.jsonl")
    logger.info("Wrote %d synthetic sample(s) to %s", count, out_dir)
    return manifest
