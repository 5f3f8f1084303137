import csv
import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from apps.dataset.manifest import load_manifest, save_manifest
from apps.dataset.types import Box
from apps.evaluation.matrix import pred_filename
from apps.imaging.io import image_size, save_image
from apps.imaging.types import blank


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out, stderr=StringIO())
    return json.loads(out.getvalue())


def test_eval_command(gt_manifest, write_predictions, tmp_path):
    save_manifest(gt_manifest, tmp_path / "gt.jsonl")
    write_predictions(tmp_path / "p.jsonl", gt_manifest)
    payload = run(
        "eval", "--manifest", str(tmp_path / "gt.jsonl"), "--preds", str(tmp_path / "p.jsonl")
    )
    assert payload["mode"] == "instance"
    assert payload["iou_threshold"] == 0.5
    assert payload["images"] == 3
    assert payload["tampered"]["f1"] == pytest.approx(100.0)

    pixel = run(
        "eval",
        "--manifest",
        str(tmp_path / "gt.jsonl"),
        "--preds",
        str(tmp_path / "p.jsonl"),
        "--mode",
        "pixel",
    )
    assert pixel["real"]["iou"] == pytest.approx(100.0)


@pytest.mark.parametrize("flag", ["--iou", "--score-threshold"])
def test_eval_threshold_out_of_range(gt_manifest, write_predictions, tmp_path, flag):
    save_manifest(gt_manifest, tmp_path / "gt.jsonl")
    write_predictions(tmp_path / "p.jsonl", gt_manifest)
    with pytest.raises(CommandError) as excinfo:
        call_command(
            "eval",
            "--manifest",
            str(tmp_path / "gt.jsonl"),
            "--preds",
            str(tmp_path / "p.jsonl"),
            flag,
            "1.5",
            stdout=StringIO(),
        )
    assert excinfo.value.returncode == 2


def test_matrix_command(matrix_inputs, tmp_path):
    registry, preds = matrix_inputs
    out = tmp_path / "out"
    payload = run("matrix", "--sessions", str(registry), "--preds", str(preds), "--out", str(out))

    assert payload["overall_mF"] == pytest.approx(100.0)
    assert payload["aggregates"]["tampered"]["mF"] == pytest.approx(100.0)
    assert json.loads((out / "matrix.json").read_text())["overall_mF"] == pytest.approx(100.0)
    assert len(list(csv.reader((out / "matrix.csv").open()))) == 36
    assert payload["protocols"]["cross_source"]["cells"] == 2
    assert payload["protocols"]["closed_set"]["class_mean"]["mF"] == pytest.approx(100.0)
    assert payload["class_mean"]["mF"] == pytest.approx(100.0)


def test_matrix_command_fails_on_missing_file(matrix_inputs, tmp_path):
    registry, preds = matrix_inputs
    (preds / pred_filename("AnyText", "TextDiffuser")).unlink()
    with pytest.raises(CommandError) as excinfo:
        call_command(
            "matrix",
            "--sessions",
            str(registry),
            "--preds",
            str(preds),
            "--out",
            str(tmp_path / "out"),
            stdout=StringIO(),
        )
    assert excinfo.value.returncode == 1
    assert "AnyText, TextDiffuser" in str(excinfo.value)
    assert not (tmp_path / "out" / "matrix.json").exists()


def test_distort_single_image(tmp_path):
    save_image(blank(100, 60, 90), tmp_path / "in.png")
    payload = run(
        "distort",
        "--op",
        "resize0.5",
        "--image",
        str(tmp_path / "in.png"),
        "--out",
        str(tmp_path / "out.png"),
    )
    assert (payload["width"], payload["height"]) == (50, 30)
    assert image_size(tmp_path / "out.png") == (50, 30)


def test_distort_manifest(sample_dataset, tmp_path):
    root, manifest = sample_dataset
    out = tmp_path / "distorted"
    payload = run(
        "distort",
        "--op",
        "resize0.5",
        "--manifest",
        str(root / "manifest.jsonl"),
        "--images",
        str(root / "images"),
        "--out",
        str(out),
    )
    assert payload["images"] == len(manifest)

    distorted = load_manifest(out / "manifest.jsonl")
    assert distorted.metadata["distortion"] == "resize0.5"
    first, source = distorted.records[0], manifest.records[0]
    assert (first.width, first.height) == (80, 60)
    assert image_size(out / first.image) == (80, 60)
    assert first.instances[0].box == Box(*(v / 2 for v in source.instances[0].box))


def test_distort_needs_exactly_one_input(tmp_path):
    with pytest.raises(CommandError) as excinfo:
        call_command("distort", "--op", "jpeg75", "--out", str(tmp_path / "o"), stdout=StringIO())
    assert excinfo.value.returncode == 2
