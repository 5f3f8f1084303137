"""
Django management command to evaluate the 9x9 open-set matrix.

Run with: python manage.py matrix --sessions registry.json --preds DIR --out DIR
"""

from apps.core.management.base import ToolkitCommand
from apps.dataset.sessions import load_session_registry
from apps.evaluation.management.commands.eval import add_scoring_arguments, scoring_options
from apps.evaluation.matrix import evaluate_matrix, write_matrix

JSON_NAME = "matrix.json"
CSV_NAME = "matrix.csv"


class Command(ToolkitCommand):
    help = (
        "Score every (train session, test session) pair and report mP / mR / mF, overall "
        "and per evaluation protocol"
    )

    def add_command_arguments(self, parser):
        parser.add_argument("--sessions", required=True, help="Session registry (JSON).")
        parser.add_argument(
            "--preds", required=True, help="Directory of <train>__<test>.jsonl files."
        )
        parser.add_argument("--out", required=True, help="Directory for matrix.json/csv.")
        add_scoring_arguments(parser)

    def run(self, **options):
        sessions = load_session_registry(
            self.require_path(options["sessions"], "--sessions"), splits=("test",)
        )
        preds_dir = self.require_path(options["preds"], "--preds", is_dir=True)
        out_dir = self.require_path(options["out"], "--out", must_exist=False)

        matrix = evaluate_matrix(
            sessions, preds_dir, threads=options["threads"], **scoring_options(options)
        )
        json_path, csv_path = write_matrix(matrix, out_dir / JSON_NAME, out_dir / CSV_NAME)
        summary = matrix.as_dict()
        return {
            "aggregates": summary["aggregates"],
            "class_mean": summary["class_mean"],
            "protocols": summary["protocols"],
            "overall_mF": matrix.overall_mf,
            "json": str(json_path),
            "csv": str(csv_path),
        }
