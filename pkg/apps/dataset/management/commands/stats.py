"""
Django management command to print per-session dataset statistics.

Run with: python manage.py stats --sessions registry.json [--check-reference]
"""

from apps.core.management.base import ToolkitCommand
from apps.dataset.sessions import load_session_registry
from apps.dataset.stats import compute_stats, total_stats, totals_dict, verify_stats


class Command(ToolkitCommand):
    help = "Count authentic/tampered images and text instances per session and split"

    def add_command_arguments(self, parser):
        parser.add_argument("--sessions", required=True, help="Session registry (JSON).")
        parser.add_argument(
            "--check-reference",
            action="store_true",
            help="Compare the counts with the published OSTF table; exit 1 on mismatch.",
        )

    def run(self, **options):
        sessions = load_session_registry(self.require_path(options["sessions"], "--sessions"))
        stats = {session.name: compute_stats(session) for session in sessions}
        payload = {
            "sessions": {name: value.as_dict() for name, value in stats.items()},
            "total": totals_dict(total_stats(list(stats.values()))),
        }
        if options["check_reference"]:
            mismatches = verify_stats(stats)
            for mismatch in mismatches:
                self.stderr.write(mismatch)
            payload["mismatches"] = mismatches
            self.failures = len(mismatches)
        return payload
