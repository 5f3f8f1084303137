"""
Django management command to apply a robustness distortion.

Run with:
    python manage.py distort --op jpeg75 --image in.png --out out.png
    python manage.py distort --op resize0.5 --manifest M --images DIR --out DIR
"""

import logging
from dataclasses import replace
from pathlib import Path

from apps.core.exceptions import ToolkitError
from apps.core.management.base import ToolkitCommand, UsageError
from apps.dataset.manifest import load_manifest, save_manifest
from apps.dataset.types import Manifest
from apps.evaluation.distort import distort, distort_record
from apps.evaluation.types import Distortion
from apps.imaging.io import load_image, save_image

logger = logging.getLogger(__name__)


class Command(ToolkitCommand):
    help = "Apply JPEG75 or half-size resizing to an image or a whole manifest"

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--op",
            required=True,
            choices=[Distortion.JPEG75, Distortion.RESIZE_HALF],
        )
        parser.add_argument("--image", default=None, help="Single input image.")
        parser.add_argument("--manifest", default=None, help="Manifest to distort as a whole.")
        parser.add_argument("--images", default=None, help="Image directory for --manifest.")
        parser.add_argument("--out", required=True, help="Output file (--image) or directory.")

    def run(self, **options):
        if (options["image"] is None) == (options["manifest"] is None):
            raise UsageError("Give exactly one of --image or --manifest")
        if options["image"] is not None:
            return self.distort_image(options)
        return self.distort_manifest(options)

    def distort_image(self, options):
        source = self.require_path(options["image"], "--image")
        target = self.require_path(options["out"], "--out", must_exist=False)
        out = distort(load_image(source), options["op"])
        save_image(out, target)
        return {
            "op": options["op"],
            "out": str(target),
            "width": out.shape[1],
            "height": out.shape[0],
        }

    def distort_manifest(self, options):
        manifest = load_manifest(self.require_path(options["manifest"], "--manifest"))
        images_dir = self.require_path(options["images"], "--images", is_dir=True)
        out_dir = self.require_path(options["out"], "--out", must_exist=False)

        records = []
        for record in manifest.records:
            relative = Path(record.image).with_suffix(".png").as_posix()
            try:
                img = distort(load_image(images_dir / record.image), options["op"])
                save_image(img, out_dir / relative)
            except ToolkitError as exc:
                logger.error("Failed to distort %s: %s", record.image, exc)
                self.failures += 1
                continue
            distorted = distort_record(record, options["op"])
            records.append(replace(distorted, image=relative))

        metadata = {**manifest.metadata, "distortion": options["op"]}
        save_manifest(Manifest(records=records, metadata=metadata), out_dir / "manifest.jsonl")
        return {"op": options["op"], "images": len(records), "failures": self.failures}
