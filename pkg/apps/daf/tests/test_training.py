import json
from io import StringIO

import numpy as np
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from apps.core.exceptions import ParameterError, TrainingError
from apps.daf.training import cluster_center, synthetic_clusters, train_toy


@pytest.fixture(scope="module")
def trained():
    return train_toy(seed=0)


def test_synthetic_clusters_layout():
    batch = synthetic_clusters(11, 6, separation=10.0, seed=1)
    assert batch.labels.tolist() == [False] * 5 + [True] * 6
    assert np.allclose(batch.global_vector, batch.roi_vectors.mean(axis=0))
    assert np.linalg.norm(cluster_center(6, 10.0, 1)) == pytest.approx(10.0)
    with pytest.raises(ParameterError):
        synthetic_clusters(1, 6)


def test_kernel_converges_to_authentic_mean(trained):
    _, report = trained
    assert report.kernel_error <= 1.0


def test_clusters_are_separated(trained):
    _, report = trained
    assert report.accuracy >= 0.99


def test_loss_curves(trained):
    _, report = trained
    assert len(report.curves["l_all"]) == 2000 // 20 + 1
    assert report.curves["l_all"][-1] < report.curves["l_all"][0]
    assert report.final.l_all == report.curves["l_all"][-1]


def test_training_is_deterministic():
    first, first_report = train_toy(dim=8, n=200, n_test=100, steps=30, seed=5)
    second, second_report = train_toy(dim=8, n=200, n_test=100, steps=30, seed=5)
    for name, block in first.blocks().items():
        assert np.array_equal(block, second.blocks()[name])
    assert first_report.curves == second_report.curves


def test_divergence_reports_the_step():
    with pytest.raises(TrainingError) as excinfo:
        train_toy(dim=4, n=40, n_test=10, steps=20, learning_rate=1e300)
    assert excinfo.value.step <= 20


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out, stderr=StringIO())
    return json.loads(out.getvalue())


def test_grad_check_command():
    payload = run("daf", "grad-check", "--seed", "4")
    assert payload["grad_check"]["passed"] is True
    assert payload["grad_check"]["max_relative_error"] < 1e-5
    assert payload["grad_check"]["dim"] == 8


def test_train_command_small():
    payload = run("daf", "train", "--dim", "8", "--n", "400", "--steps", "1500")
    assert payload["train"]["passed"] is True
    assert payload["train"]["accuracy"] >= 0.99


def test_untrained_kernel_fails_the_command():
    with pytest.raises(CommandError) as excinfo:
        call_command("daf", "train", "--dim", "8", "--n", "400", "--steps", "0", stdout=StringIO())
    assert excinfo.value.returncode == 1


def test_negative_steps_is_usage_error():
    with pytest.raises(CommandError) as excinfo:
        call_command("daf", "train", "--steps", "-1", stdout=StringIO())
    assert excinfo.value.returncode == 2
