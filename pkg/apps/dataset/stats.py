"""
Dataset statistics and comparison against the OSTF reference table.
"""

from apps.core.exceptions import ParameterError
from apps.dataset.constants import REFERENCE_STATS, REFERENCE_TOTALS
from apps.dataset.types import DatasetStats, Label, Manifest, Session, SplitStats


def split_stats(manifest: Manifest) -> SplitStats:
    """
    An image counts as tampered when it holds at least one tampered instance.
    """
    images_tampered = images_authentic = 0
    instances_tampered = instances_authentic = 0
    for record in manifest.records:
        tampered = sum(1 for instance in record.instances if instance.label == Label.TAMPERED)
        instances_tampered += tampered
        instances_authentic += len(record.instances) - tampered
        if tampered:
            images_tampered += 1
        else:
            images_authentic += 1
    return SplitStats(images_authentic, images_tampered, instances_authentic, instances_tampered)


def compute_stats(session: Session) -> DatasetStats:
    return DatasetStats(
        train=split_stats(session.train_manifest),
        test=split_stats(session.test_manifest),
    )


def total_stats(stats: list[DatasetStats]) -> DatasetStats:
    total = DatasetStats()
    for item in stats:
        total = total + item
    return total


def totals_dict(stats: DatasetStats) -> dict:
    return {
        "images": stats.images,
        "tampered_images": stats.tampered_images,
        "instances": stats.instances,
        "tampered_instances": stats.tampered_instances,
    }


def reference_stats(session_name: str) -> DatasetStats:
    try:
        return REFERENCE_STATS[session_name]
    except KeyError:
        raise ParameterError(f"{session_name}: not a reference session") from None


def verify_stats(stats_by_session: dict[str, DatasetStats]) -> list[str]:
    """
    Compare computed statistics with the reference rows (and totals when all nine
    sessions are present).

    Returns:
        Human-readable mismatch descriptions; empty when everything matches.
    """
    mismatches = []
    for name, stats in sorted(stats_by_session.items()):
        reference = REFERENCE_STATS.get(name)
        if reference is None:
            mismatches.append(f"{name}: not a reference session")
            continue
        for split in ("train", "test"):
            got = stats.as_dict()[split]
            want = reference.as_dict()[split]
            for key in sorted(want):
                if got[key] != want[key]:
                    mismatches.append(f"{name}.{split}.{key}: got {got[key]}, expected {want[key]}")

    if set(stats_by_session) == set(REFERENCE_STATS):
        totals = totals_dict(total_stats(list(stats_by_session.values())))
        for key, want in REFERENCE_TOTALS.items():
            if totals[key] != want:
                mismatches.append(f"total.{key}: got {totals[key]}, expected {want}")
    return mismatches
