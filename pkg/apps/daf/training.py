"""
Desk-scale training of the forensics head on synthetic feature clusters.

Authentic features are drawn around the origin and tampered ones around a centre at
distance ``separation``, both with unit variance. Plain full-batch gradient descent
should pull the authentic kernel onto the authentic mean while the classifier separates
the two clusters.
"""

import logging

import numpy as np

from apps.core.exceptions import ParameterError, TrainingError
from apps.core.rng import generator_for
from apps.daf.gradients import gradients
from apps.daf.head import forward
from apps.daf.losses import total_loss
from apps.daf.types import DEFAULT_MARGIN, DafParams, DistanceTarget, FeatureBatch, ToyReport

logger = logging.getLogger(__name__)


def cluster_center(dim: int, separation: float, seed: int) -> np.ndarray:
    direction = generator_for(seed, "center").standard_normal(dim)
    return separation * direction / np.linalg.norm(direction)


def synthetic_clusters(
    n: int,
    dim: int,
    separation: float = 10.0,
    seed: int = 0,
    center=None,
    stream: str = "train",
) -> FeatureBatch:
    """
    ``n // 2`` authentic rows around the origin followed by the tampered rows; the global
    vector is the batch mean.
    """
    if n < 2 or dim < 1:
        raise ParameterError("synthetic clusters need n >= 2 and dim >= 1")
    center = cluster_center(dim, separation, seed) if center is None else np.asarray(center)
    rng = generator_for(seed, stream)
    n_auth = n // 2
    authentic = rng.standard_normal((n_auth, dim))
    tampered = center + rng.standard_normal((n - n_auth, dim))
    roi = np.vstack([authentic, tampered])
    labels = np.concatenate([np.zeros(n_auth, dtype=bool), np.ones(n - n_auth, dtype=bool)])
    return FeatureBatch(roi_vectors=roi, global_vector=roi.mean(axis=0), labels=labels)


def random_params(
    dim: int, seed: int = 0, scale: float = 0.1, margin: float = DEFAULT_MARGIN, **kwargs
) -> DafParams:
    """Small random parameters for gradient checks."""
    rng = generator_for(seed, "params")
    return DafParams(
        kernel=rng.standard_normal(dim),
        mod_weight=scale * rng.standard_normal((dim, 2 * dim)),
        mod_bias=scale * rng.standard_normal(dim),
        cls_weight=scale * rng.standard_normal(dim),
        cls_bias=float(scale * rng.standard_normal()),
        margin=margin,
        **kwargs,
    )


def accuracy(batch: FeatureBatch, params: DafParams) -> float:
    predicted = forward(batch, params) >= 0.5
    return float(np.mean(predicted == batch.labels))


def train_toy(
    dim: int = 32,
    n: int = 2000,
    n_test: int = 1000,
    separation: float = 10.0,
    margin: float = 4.0,
    steps: int = 2000,
    learning_rate: float = 0.05,
    seed: int = 0,
    distance_target: str = DistanceTarget.KERNEL,
    curve_every: int = 20,
) -> tuple[DafParams, ToyReport]:
    """
    Full-batch gradient descent on ``l_cls + l_feat`` (the box term is constant here).

    The kernel starts at the mean of all training features; the modulation map and the
    classifier start at zero.

    Raises:
        TrainingError: the loss or a gradient stops being finite.
    """
    if steps < 0 or learning_rate <= 0:
        raise ParameterError("steps must be >= 0 and learning_rate > 0")
    center = cluster_center(dim, separation, seed)
    train = synthetic_clusters(n, dim, separation, seed, center=center, stream="train")
    test = synthetic_clusters(n_test, dim, separation, seed, center=center, stream="test")

    params = DafParams.zeros(dim, margin=margin, distance_target=distance_target)
    params = params.with_blocks(kernel=train.roi_vectors.mean(axis=0))

    curves = {"l_all": [], "l_cls": [], "l_feat": []}
    for step in range(steps + 1):
        breakdown = total_loss(train, params)
        if not np.isfinite(breakdown.l_all):
            raise TrainingError(step)
        if step % curve_every == 0 or step == steps:
            for key in curves:
                curves[key].append(getattr(breakdown, key))
            logger.debug("step %d: %s", step, breakdown)
        if step == steps:
            break
        grads = gradients(train, params)
        if not all(np.all(np.isfinite(grads[name])) for name in grads):
            raise TrainingError(step, "gradient is not finite")
        try:
            params = params.stepped(grads, learning_rate)
        except ParameterError as exc:
            raise TrainingError(step, str(exc)) from exc

    authentic_mean = train.roi_vectors[~train.labels].mean(axis=0)
    report = ToyReport(
        steps=steps,
        kernel_error=float(np.linalg.norm(params.kernel - authentic_mean)),
        accuracy=accuracy(test, params),
        final=breakdown,
        curves=curves,
    )
    logger.info(
        "Toy training: |K - authentic mean| = %.4f, held-out accuracy = %.4f",
        report.kernel_error,
        report.accuracy,
    )
    return params, report
