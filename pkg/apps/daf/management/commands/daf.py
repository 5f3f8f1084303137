"""
Django management command for the forensics-head numerical core.

Run with:
    python manage.py daf grad-check [--dim 8] [--n 16] [--epsilon 1e-6]
    python manage.py daf train [--steps 2000] [--margin 4]
    python manage.py daf demo
"""

from django.conf import settings

from apps.core.management.base import ToolkitCommand, UsageError
from apps.daf.gradients import block_errors
from apps.daf.training import random_params, synthetic_clusters, train_toy
from apps.daf.types import DistanceTarget

ACTIONS = ["demo", "grad-check", "train"]

# Cluster separation of the gradient-check batch; any value keeps it away from kinks.
GRAD_CHECK_SEPARATION = 3.0

KERNEL_ERROR_LIMIT = 1.0
ACCURACY_TARGET = 0.99


def _pick(options, key, defaults):
    value = options.get(key)
    return defaults[key] if value is None else value


class Command(ToolkitCommand):
    help = "Verify the analytic gradients and run the toy training of the forensics head"

    def add_command_arguments(self, parser):
        parser.add_argument("action", choices=ACTIONS)
        parser.add_argument("--dim", type=int, default=None, help="Feature dimension D.")
        parser.add_argument("--n", type=int, default=None, help="Batch size N.")
        parser.add_argument("--epsilon", type=float, default=None, help="Finite-difference step.")
        parser.add_argument("--tolerance", type=float, default=None, help="Pass threshold.")
        parser.add_argument("--margin", type=float, default=None, help="Feature-loss margin.")
        parser.add_argument("--steps", type=int, default=None, help="Training steps.")
        parser.add_argument("--learning-rate", type=float, default=None)
        parser.add_argument("--separation", type=float, default=None)
        parser.add_argument(
            "--distance-target", choices=DistanceTarget.values, default=DistanceTarget.KERNEL
        )

    def run(self, **options):
        action = options["action"]
        for flag in ("dim", "n", "steps"):
            if options[flag] is not None and options[flag] < (0 if flag == "steps" else 1):
                raise UsageError(f"--{flag} is out of range")
        seed = options["seed"] or 0

        payload = {"action": action, "seed": seed}
        if action in ("demo", "grad-check"):
            payload["grad_check"] = self.grad_check(options, seed)
        if action in ("demo", "train"):
            payload["train"] = self.train(options, seed)
        return payload

    def grad_check(self, options, seed) -> dict:
        defaults = settings.DAF["grad_check"]
        dim = _pick(options, "dim", defaults)
        n = _pick(options, "n", defaults)
        epsilon = _pick(options, "epsilon", defaults)
        tolerance = _pick(options, "tolerance", defaults)
        margin = _pick(options, "margin", settings.DAF)

        params = random_params(dim, seed, margin=margin, distance_target=options["distance_target"])
        batch = synthetic_clusters(n, dim, GRAD_CHECK_SEPARATION, seed, stream="grad-check")
        errors = block_errors(params, batch, epsilon)
        worst = max(errors.values())
        passed = worst < tolerance
        if not passed:
            self.failures += 1
        return {
            "dim": dim,
            "n": n,
            "epsilon": epsilon,
            "tolerance": tolerance,
            "blocks": errors,
            "max_relative_error": worst,
            "passed": passed,
        }

    def train(self, options, seed) -> dict:
        defaults = settings.DAF["toy"]
        params, report = train_toy(
            dim=_pick(options, "dim", defaults),
            n=_pick(options, "n", defaults),
            n_test=defaults["n_test"],
            separation=_pick(options, "separation", defaults),
            margin=_pick(options, "margin", defaults),
            steps=_pick(options, "steps", defaults),
            learning_rate=_pick(options, "learning_rate", defaults),
            seed=seed,
            distance_target=options["distance_target"],
        )
        result = report.as_dict()
        result["passed"] = (
            report.kernel_error <= KERNEL_ERROR_LIMIT and report.accuracy >= ACCURACY_TARGET
        )
        if not result["passed"]:
            self.failures += 1
        result["params"] = {"cls_bias": params.cls_bias, "margin": params.margin}
        return result
