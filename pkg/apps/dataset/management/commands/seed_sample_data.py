"""
Django management command to write a small synthetic dataset.

Run with: python manage.py seed_sample_data --out DIR [--count 8] [--seed 0]
"""

from apps.core.management.base import ToolkitCommand, UsageError
from apps.dataset.samples import write_sample_dataset


class Command(ToolkitCommand):
    help = "Write synthetic scene-text images and their manifest for trying the toolkit"

    def add_command_arguments(self, parser):
        parser.add_argument("--out", required=True, help="Output directory.")
        parser.add_argument("--count", type=int, default=8, help="Number of images.")
        parser.add_argument("--width", type=int, default=256)
        parser.add_argument("--height", type=int, default=192)
        parser.add_argument("--texts", type=int, default=6, help="Text plates per image.")

    def run(self, **options):
        if min(options["count"], options["texts"]) < 0:
            raise UsageError("--count and --texts must be >= 0")
        if options["width"] < 32 or options["height"] < 32:
            raise UsageError("--width and --height must be >= 32")
        out_dir = self.require_path(options["out"], "--out", must_exist=False)
        manifest = write_sample_dataset(
            out_dir,
            count=options["count"],
            seed=options["seed"] or 0,
            width=options["width"],
            height=options["height"],
            texts=options["texts"],
        )
        return {
            "out": str(out_dir),
            "images": len(manifest),
            "instances": sum(len(record.instances) for record in manifest.records),
        }
