"""
Django management command to apply Texture Jitter to a manifest of images.

Run with: python manage.py jitter --manifest M --images DIR --out DIR [--seed S] [--prob P]
"""

import logging

from apps.core.management.base import ToolkitCommand, UsageError
from apps.dataset.manifest import load_manifest
from apps.jitter.config import build_config, load_config_file
from apps.jitter.runner import run_jitter_batch

logger = logging.getLogger(__name__)


class Command(ToolkitCommand):
    help = "Relabel randomly chosen authentic text as tampered after subtle texture edits"

    def add_command_arguments(self, parser):
        parser.add_argument("--manifest", required=True, help="Input manifest (JSONL).")
        parser.add_argument("--images", required=True, help="Directory holding source images.")
        parser.add_argument("--out", required=True, help="Output directory.")
        parser.add_argument("--prob", type=float, default=None, help="Selection probability.")
        parser.add_argument("--config", default=None, help="JSON file overriding JITTER settings.")

    def run(self, **options):
        manifest_path = self.require_path(options["manifest"], "--manifest")
        images_dir = self.require_path(options["images"], "--images", is_dir=True)
        out_dir = self.require_path(options["out"], "--out", must_exist=False)
        if options["prob"] is not None and not 0.0 <= options["prob"] <= 1.0:
            raise UsageError("--prob must be in [0, 1]")

        overrides = load_config_file(options["config"]) if options["config"] else None
        config = build_config(
            overrides, global_seed=options["seed"], selection_prob=options["prob"]
        )
        manifest = load_manifest(manifest_path)
        summary = run_jitter_batch(
            manifest, images_dir, out_dir, config, threads=options["threads"]
        )
        self.failures = len(summary.failures)
        return summary.as_dict()
