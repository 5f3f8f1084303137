import json

import pytest

from apps.core.jsonl import write_jsonl
from apps.dataset.constants import SESSION_NAMES
from apps.dataset.manifest import save_manifest
from apps.dataset.types import Box, Label, Manifest, ManifestRecord, TextInstance
from apps.evaluation.matrix import pred_filename
from apps.evaluation.types import LABEL_TO_CLASS


@pytest.fixture
def gt_manifest():
    """
    Three 100x60 images, each with authentic and tampered text.

    Returns:
        Manifest
    """
    records = [
        ManifestRecord(
            f"test_{i}.jpg",
            100,
            60,
            (
                TextInstance(label=Label.AUTHENTIC, box=Box(10 + i, 10, 20, 20)),
                TextInstance(label=Label.TAMPERED, box=Box(50, 20 + i, 30, 12)),
            ),
        )
        for i in range(3)
    ]
    return Manifest(records=records)


@pytest.fixture
def write_predictions():
    """
    Writes the ground truth of a manifest back as a prediction file with score 1.

    Returns:
        Callable (path, manifest, scale=1.0) -> path
    """

    def _write(path, manifest, scale=1.0):
        payloads = [
            {
                "image": record.image,
                "predictions": [
                    {
                        "bbox": [v * scale for v in instance.bbox],
                        "class": str(LABEL_TO_CLASS[instance.label]),
                        "score": 1.0,
                    }
                    for instance in record.instances
                ],
            }
            for record in manifest.records
        ]
        write_jsonl(path, payloads)
        return path

    return _write


@pytest.fixture
def matrix_inputs(tmp_path, gt_manifest, write_predictions):
    """
    A registry naming all nine sessions (sharing one test manifest) and a prediction
    directory with a perfect prediction file for each of the 81 cells.

    Returns:
        Tuple (registry path, predictions directory)
    """
    save_manifest(gt_manifest, tmp_path / "test.jsonl")
    registry = tmp_path / "sessions.json"
    registry.write_text(
        json.dumps({name: {"train": "test.jsonl", "test": "test.jsonl"} for name in SESSION_NAMES})
    )
    preds = tmp_path / "preds"
    for train in SESSION_NAMES:
        for test in SESSION_NAMES:
            write_predictions(preds / pred_filename(train, test), gt_manifest)
    return registry, preds
