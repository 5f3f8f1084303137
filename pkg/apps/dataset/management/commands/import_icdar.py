"""
Django management command to convert ICDAR ground-truth files into a manifest.

Run with: python manage.py import_icdar --gt DIR --images DIR --out manifest.jsonl
"""

from apps.core.management.base import ToolkitCommand
from apps.dataset.icdar import ImportReport, import_icdar_gt
from apps.dataset.manifest import save_manifest


class Command(ToolkitCommand):
    help = "Import ICDAR-style ground truth (4-point or 2-point lines) as an all-authentic manifest"

    def add_command_arguments(self, parser):
        parser.add_argument("--gt", required=True, help="Directory of ground-truth .txt files.")
        parser.add_argument("--images", required=True, help="Directory of the matching images.")
        parser.add_argument("--out", required=True, help="Manifest to write.")

    def run(self, **options):
        gt_dir = self.require_path(options["gt"], "--gt", is_dir=True)
        images_dir = self.require_path(options["images"], "--images", is_dir=True)
        out = self.require_path(options["out"], "--out", must_exist=False)

        report = ImportReport()
        manifest = import_icdar_gt(gt_dir, images_dir, report)
        save_manifest(manifest, out)
        return {
            "out": str(out),
            "files": report.files,
            "images": len(manifest),
            "instances": sum(len(record.instances) for record in manifest.records),
            "warnings": len(report.warnings),
        }
