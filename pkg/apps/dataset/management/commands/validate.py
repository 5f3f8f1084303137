"""
Django management command to check a manifest for bad geometry and duplicates.

Run with: python manage.py validate --manifest M
"""

from apps.core.management.base import ToolkitCommand
from apps.dataset.manifest import load_manifest
from apps.dataset.validation import validate_manifest


class Command(ToolkitCommand):
    help = "Report out-of-bounds, duplicate and degenerate manifest entries"

    def add_command_arguments(self, parser):
        parser.add_argument("--manifest", required=True, help="Manifest (JSONL).")

    def run(self, **options):
        manifest = load_manifest(self.require_path(options["manifest"], "--manifest"))
        report = validate_manifest(manifest)
        self.failures = report.exit_status
        return {"images": len(manifest), **report.as_dict()}
