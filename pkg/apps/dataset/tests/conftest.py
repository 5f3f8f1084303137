import json

import pytest

from apps.dataset.manifest import save_manifest
from apps.dataset.types import Box, Label, Manifest, ManifestRecord, TextInstance


def _instance(label, index):
    return TextInstance(label=label, box=Box(index % 50, 5, 10, 8))


@pytest.fixture
def split_manifest():
    """
    Factory building a manifest with exact image/instance counts.

    Tampered images get one tampered instance each, with the surplus on the first
    tampered image; authentic instances are spread round-robin over all images.

    Returns:
        Callable (images_auth, images_tamp, inst_auth, inst_tamp, prefix) -> Manifest
    """

    def _build(images_auth, images_tamp, inst_auth, inst_tamp, prefix="img"):
        assert images_tamp <= inst_tamp and (images_tamp or not inst_tamp)
        total = images_auth + images_tamp
        buckets = [[] for _ in range(total)]
        for index in range(inst_tamp):
            target = images_auth + (index if index < images_tamp else 0)
            buckets[target].append(_instance(Label.TAMPERED, index))
        for index in range(inst_auth):
            buckets[index % total].append(_instance(Label.AUTHENTIC, index))
        records = [
            ManifestRecord(f"{prefix}_{i:04d}.jpg", 640, 480, tuple(instances))
            for i, instances in enumerate(buckets)
        ]
        return Manifest(records=records)

    return _build


@pytest.fixture
def dst_registry(tmp_path, split_manifest):
    """
    A session registry holding only the DST session, built to its published counts.

    Returns:
        Path to the registry JSON file
    """
    save_manifest(split_manifest(72, 157, 382, 467, "train"), tmp_path / "dst" / "train.jsonl")
    save_manifest(split_manifest(82, 151, 588, 507, "test"), tmp_path / "dst" / "test.jsonl")
    registry = tmp_path / "sessions.json"
    registry.write_text(
        json.dumps({"DST": {"train": "dst/train.jsonl", "test": "dst/test.jsonl"}})
    )
    return registry
