import math

import numpy as np
import pytest
from scipy.special import expit

from apps.core.exceptions import ParameterError
from apps.daf.head import forward, modulated_kernel
from apps.daf.losses import distances, loss_bbox, loss_cls, loss_feat, total_loss
from apps.daf.training import random_params, synthetic_clusters
from apps.daf.types import DafParams, DistanceTarget, FeatureBatch


def test_zero_classifier_gives_half():
    batch = synthetic_clusters(10, 4, seed=1)
    params = random_params(4, seed=2).with_blocks(cls_weight=np.zeros(4), cls_bias=0.0)
    assert np.allclose(forward(batch, params), 0.5)


def test_identity_modulation_cancels_roi():
    dim = 5
    batch = synthetic_clusters(12, dim, seed=3)
    params = DafParams(
        kernel=np.zeros(dim),
        mod_weight=np.hstack([np.zeros((dim, dim)), np.eye(dim)]),
        mod_bias=np.zeros(dim),
        cls_weight=np.random.default_rng(0).standard_normal(dim),
        cls_bias=1.3,
    )
    assert np.allclose(modulated_kernel(batch, params), batch.roi_vectors)
    assert np.allclose(forward(batch, params), expit(1.3))


def test_forward_is_row_independent():
    batch = synthetic_clusters(8, 6, seed=4)
    params = random_params(6, seed=5)
    doubled = FeatureBatch(
        roi_vectors=np.repeat(batch.roi_vectors, 2, axis=0),
        global_vector=batch.global_vector,
        labels=np.repeat(batch.labels, 2),
    )
    assert np.array_equal(forward(doubled, params), np.repeat(forward(batch, params), 2))


def test_forward_dimension_mismatch():
    with pytest.raises(ParameterError):
        forward(synthetic_clusters(4, 3), random_params(5))


@pytest.mark.parametrize(
    "probs, labels, expected",
    [
        ([0.5, 0.5, 0.5], [0, 1, 1], math.log(2)),
        ([0.9], [1], -math.log(0.9)),
        ([0.0, 1.0], [0, 1], 0.0),
    ],
)
def test_loss_cls(probs, labels, expected):
    assert loss_cls(probs, labels) == pytest.approx(expected, abs=1e-6)


def test_loss_cls_clamps_confident_mistakes():
    assert math.isfinite(loss_cls([1.0], [0]))
    assert loss_cls([1.0], [0]) == pytest.approx(-math.log(1e-7))


def test_loss_feat_zero_when_authentic_on_kernel(make_batch):
    batch = make_batch([[0.0, 0.0], [0.0, 0.0], [40.0, 0.0]], [False, False, True])
    l_feat, dist_auth, dist_tamp = loss_feat(batch, DafParams.zeros(2))
    assert (l_feat, dist_auth, dist_tamp) == (0.0, 0.0, 40.0)


def test_loss_feat_hinge_active(make_batch):
    batch = make_batch([[3.0, 4.0], [0.0, 10.0]], [False, True])
    l_feat, dist_auth, dist_tamp = loss_feat(batch, DafParams.zeros(2, margin=32.0))
    assert dist_auth == 5.0
    assert dist_tamp == 10.0
    assert l_feat == 32.0


def test_loss_feat_without_tampered_instances(make_batch, app_logs):
    batch = make_batch([[0.0, 3.0]], [False])
    l_feat, _, dist_tamp = loss_feat(batch, DafParams.zeros(2))
    assert dist_tamp == 0.0
    assert l_feat == 3.0 + 35.0
    assert "without tampered" in app_logs.text


def test_distances_against_modulated_kernel(make_batch):
    batch = make_batch([[1.0, 1.0], [2.0, 0.0]], [False, True])
    params = DafParams.zeros(2, distance_target=DistanceTarget.MODULATED).with_blocks(
        kernel=np.array([100.0, 100.0]), mod_bias=np.array([1.0, 0.0])
    )
    assert np.allclose(distances(batch, params), [1.0, 1.0])


@pytest.mark.parametrize(
    "pred, target, expected",
    [
        ([[1, 2, 3, 4], [0, 0, 5, 5]], [[1, 2, 3, 4], [0, 0, 5, 5]], 0.0),
        ([[1, 2, 3, 4], [0, 0, 5, 5]], [[0, 1, 2, 3], [-1, -1, 4, 4]], 1.0),
        ([0, 0, 1, 1], [0, 0, 3, 1], 0.5),
    ],
)
def test_loss_bbox(pred, target, expected):
    assert loss_bbox(pred, target) == pytest.approx(expected)


def test_loss_bbox_shape_mismatch():
    with pytest.raises(ParameterError):
        loss_bbox([[0, 0, 1, 1]], [[0, 0, 1, 1], [0, 0, 1, 1]])
    with pytest.raises(ParameterError):
        loss_bbox([[0, 0, 1]], [[0, 0, 1]])


def test_total_loss_worked_example(make_batch):
    batch = make_batch([[3.0, 4.0], [0.0, 10.0]], [False, True])
    breakdown = total_loss(batch, DafParams.zeros(2, margin=32.0))
    assert breakdown.l_cls == pytest.approx(0.6931, abs=1e-4)
    assert breakdown.l_bbox == 0.0
    assert breakdown.l_feat == 32.0
    assert breakdown.l_all == pytest.approx(32.6931, abs=1e-4)


@pytest.mark.parametrize("seed", range(5))
def test_total_loss_is_sum_of_parts(seed):
    rng = np.random.default_rng(seed)
    batch = synthetic_clusters(10, 4, seed=seed)
    pred = rng.standard_normal((3, 4))
    target = rng.standard_normal((3, 4))
    breakdown = total_loss(batch, random_params(4, seed=seed), pred, target)
    assert breakdown.l_all - (breakdown.l_cls + breakdown.l_bbox + breakdown.l_feat) == 0.0
    assert breakdown.l_bbox > 0


@pytest.mark.parametrize("seed", range(10))
def test_loss_feat_is_invariant_under_joint_translation(seed):
    rng = np.random.default_rng(seed)
    batch = synthetic_clusters(12, 5, seed=seed)
    params = random_params(5, seed=seed)
    shift = rng.uniform(-50.0, 50.0, 5)
    moved = FeatureBatch(
        roi_vectors=batch.roi_vectors + shift,
        global_vector=batch.global_vector,
        labels=batch.labels,
    )
    shifted = params.with_blocks(kernel=params.kernel + shift)

    assert params.distance_target == DistanceTarget.KERNEL
    assert loss_feat(moved, shifted) == pytest.approx(loss_feat(batch, params), rel=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_total_loss_is_invariant_under_instance_permutation(seed):
    rng = np.random.default_rng(seed)
    batch = synthetic_clusters(12, 5, seed=seed)
    params = random_params(5, seed=seed)
    pred = rng.standard_normal((12, 4))
    target = rng.standard_normal((12, 4))
    order = rng.permutation(12)
    shuffled = FeatureBatch(
        roi_vectors=batch.roi_vectors[order],
        global_vector=batch.global_vector,
        labels=batch.labels[order],
    )

    expected = total_loss(batch, params, pred, target).as_dict()
    got = total_loss(shuffled, params, pred[order], target[order]).as_dict()
    assert got == pytest.approx(expected, rel=1e-9)
