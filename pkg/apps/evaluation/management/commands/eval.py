"""
Django management command to score one prediction file against one manifest.

Run with: python manage.py eval --manifest M --preds P [--mode instance|pixel] [--iou 0.5]
"""

from django.conf import settings

from apps.core.management.base import ToolkitCommand, UsageError
from apps.dataset.manifest import load_manifest
from apps.evaluation.predictions import load_predictions
from apps.evaluation.session import evaluate_session
from apps.evaluation.types import Distortion, EvalMode


def add_scoring_arguments(parser):
    parser.add_argument("--mode", choices=EvalMode.values, default=EvalMode.INSTANCE)
    parser.add_argument("--iou", type=float, default=None, help="Instance IoU threshold.")
    parser.add_argument(
        "--score-threshold", type=float, default=None, help="Minimum prediction score."
    )
    parser.add_argument("--distort", choices=Distortion.values, default=Distortion.NONE)


def scoring_options(options) -> dict:
    defaults = settings.EVALUATION
    iou = defaults["iou_threshold"] if options["iou"] is None else options["iou"]
    score = (
        defaults["score_threshold"]
        if options["score_threshold"] is None
        else options["score_threshold"]
    )
    for flag, value in (("--iou", iou), ("--score-threshold", score)):
        if not 0.0 <= value <= 1.0:
            raise UsageError(f"{flag} must be in [0, 1]")
    return {
        "mode": options["mode"],
        "iou_threshold": iou,
        "score_threshold": score,
        "distortion": options["distort"],
    }


class Command(ToolkitCommand):
    help = "Score detector predictions at instance or pixel level"

    def add_command_arguments(self, parser):
        parser.add_argument("--manifest", required=True, help="Ground-truth manifest (JSONL).")
        parser.add_argument("--preds", required=True, help="Prediction file (JSONL).")
        add_scoring_arguments(parser)

    def run(self, **options):
        manifest = load_manifest(self.require_path(options["manifest"], "--manifest"))
        predictions = load_predictions(self.require_path(options["preds"], "--preds"))
        params = scoring_options(options)
        scores = evaluate_session(manifest, predictions, **params)
        return {
            **params,
            "images": len(manifest),
            **{cls: value.as_dict() for cls, value in scores.items()},
        }
