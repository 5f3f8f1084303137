"""
Manifest validation report.
"""

import math
from collections import Counter
from dataclasses import dataclass, field

from django.db import models

from apps.dataset.types import Manifest


class Severity(models.TextChoices):
    ERROR = "error", "Error"
    WARNING = "warning", "Warning"


@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    image: str
    message: str
    instance_index: int | None = None

    def as_dict(self) -> dict:
        return {
            "severity": str(self.severity),
            "code": self.code,
            "image": self.image,
            "instance_index": self.instance_index,
            "message": self.message,
        }


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def has_errors(self) -> bool:
        return any(finding.severity == Severity.ERROR for finding in self.findings)

    @property
    def exit_status(self) -> int:
        return 1 if self.has_errors else 0

    def __bool__(self) -> bool:
        return bool(self.findings)

    def as_dict(self) -> dict:
        return {
            "errors": sum(1 for f in self.findings if f.severity == Severity.ERROR),
            "warnings": sum(1 for f in self.findings if f.severity == Severity.WARNING),
            "findings": [finding.as_dict() for finding in self.findings],
        }


def _points(instance):
    if instance.quad is not None:
        return list(instance.quad)
    box = instance.box
    return [(box.x, box.y), (box.x + box.w, box.y + box.h)]


def validate_manifest(manifest: Manifest) -> ValidationReport:
    report = ValidationReport()
    add = report.findings.append

    counts = Counter(record.image for record in manifest.records)
    for image, count in sorted(counts.items()):
        if count > 1:
            add(Finding(Severity.ERROR, "duplicate_image", image, f"listed {count} times"))

    for record in manifest.records:
        if record.width < 1 or record.height < 1:
            size = f"{record.width}x{record.height}"
            add(Finding(Severity.ERROR, "bad_dimensions", record.image, size))
            continue
        for index, instance in enumerate(record.instances):
            points = _points(instance)
            if not all(math.isfinite(v) for point in points for v in point):
                add(Finding(Severity.ERROR, "non_finite", record.image, "non-finite value", index))
                continue
            outside = [
                (x, y)
                for x, y in points
                if not (0 <= x <= record.width and 0 <= y <= record.height)
            ]
            if outside:
                add(
                    Finding(
                        Severity.ERROR,
                        "out_of_bounds",
                        record.image,
                        f"coordinates {outside} outside {record.width}x{record.height}",
                        index,
                    )
                )
            box = instance.bbox
            if box.w <= 0 or box.h <= 0:
                add(
                    Finding(
                        Severity.ERROR,
                        "degenerate_instance",
                        record.image,
                        f"zero-area geometry (w={box.w}, h={box.h})",
                        index,
                    )
                )
            elif box.w < 1 or box.h < 1:
                add(
                    Finding(
                        Severity.WARNING,
                        "sub_pixel_instance",
                        record.image,
                        f"instance narrower than one pixel (w={box.w}, h={box.h})",
                        index,
                    )
                )
    return report
