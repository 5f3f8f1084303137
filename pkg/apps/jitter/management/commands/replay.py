"""
Django management command to re-apply stored jitter recipes to source images.

Run with: python manage.py replay --manifest M --images DIR --recipes R --out DIR
"""

from apps.core.management.base import ToolkitCommand
from apps.dataset.manifest import load_manifest
from apps.jitter.runner import replay_batch


class Command(ToolkitCommand):
    help = "Reproduce jittered images bit-exactly from a recipes file"

    def add_command_arguments(self, parser):
        parser.add_argument("--manifest", required=True, help="Source manifest (JSONL).")
        parser.add_argument("--images", required=True, help="Directory holding source images.")
        parser.add_argument("--recipes", required=True, help="recipes.jsonl from a jitter run.")
        parser.add_argument("--out", required=True, help="Output directory.")

    def run(self, **options):
        manifest = load_manifest(self.require_path(options["manifest"], "--manifest"))
        return replay_batch(
            manifest,
            self.require_path(options["images"], "--images", is_dir=True),
            self.require_path(options["recipes"], "--recipes"),
            self.require_path(options["out"], "--out", must_exist=False),
        )
