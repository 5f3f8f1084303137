"""
Canonical annotation types.

A text instance keeps its geometry exactly as ingested (quadrilateral or axis-aligned box);
the integer pixel bounding box is derived on demand.
"""

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

from django.db import models


class Label(models.TextChoices):
    AUTHENTIC = "authentic", "Authentic"
    TAMPERED = "tampered", "Tampered"


class TamperingMethod(models.TextChoices):
    DST = "DST", "DST"
    SRNET = "SRNet", "SRNet"
    STEFANN = "STEFANN", "STEFANN"
    MOSTEL = "MOSTEL", "MOSTEL"
    DIFFSTE = "DiffSTE", "DiffSTE"
    ANYTEXT = "AnyText", "AnyText"
    UDIFFTEXT_IC13 = "UDiffText_IC13", "UDiffText (ICDAR 2013)"
    UDIFFTEXT_TEXTOCR = "UDiffText_TextOCR", "UDiffText (TextOCR val)"
    TEXTDIFFUSER = "TextDiffuser", "TextDiffuser"


class Box(NamedTuple):
    """Axis-aligned rectangle: top-left corner plus width and height."""

    x: float
    y: float
    w: float
    h: float

    @property
    def area(self) -> float:
        return max(0.0, self.w) * max(0.0, self.h)

    def scaled(self, sx: float, sy: float) -> "Box":
        return Box(self.x * sx, self.y * sy, self.w * sx, self.h * sy)

    def clamped(self, width: int, height: int) -> "Box":
        x0 = min(max(self.x, 0.0), width)
        y0 = min(max(self.y, 0.0), height)
        x1 = min(max(self.x + self.w, 0.0), width)
        y1 = min(max(self.y + self.h, 0.0), height)
        return Box(x0, y0, max(0.0, x1 - x0), max(0.0, y1 - y0))

    def pixel_rect(self, width: int, height: int) -> "Rect":
        """Integer rectangle covering the box, clamped to the image."""
        x0 = min(max(math.floor(self.x), 0), width)
        y0 = min(max(math.floor(self.y), 0), height)
        x1 = min(max(math.ceil(self.x + self.w), 0), width)
        y1 = min(max(math.ceil(self.y + self.h), 0), height)
        return Rect(x0, y0, x1 - x0, y1 - y0)


class Rect(NamedTuple):
    """Integer pixel rectangle, half-open: columns [x, x + w), rows [y, y + h)."""

    x: int
    y: int
    w: int
    h: int

    @property
    def slices(self) -> tuple[slice, slice]:
        return slice(self.y, self.y + self.h), slice(self.x, self.x + self.w)

    def expanded(self, margin: int, width: int, height: int) -> "Rect":
        x0 = max(0, self.x - margin)
        y0 = max(0, self.y - margin)
        x1 = min(width, self.x + self.w + margin)
        y1 = min(height, self.y + self.h + margin)
        return Rect(x0, y0, x1 - x0, y1 - y0)

    def relative_to(self, outer: "Rect") -> "Rect":
        return Rect(self.x - outer.x, self.y - outer.y, self.w, self.h)


@dataclass(frozen=True)
class TextInstance:
    """
    One annotated text region. Exactly one of ``quad`` (four clockwise corner points) or
    ``box`` is set. ``ignore`` marks a don't-care region (ICDAR ``###``): it is never
    jittered and neither rewards nor penalizes a detector.
    """

    label: str = Label.AUTHENTIC
    quad: tuple[tuple[float, float], ...] | None = None
    box: Box | None = None
    transcription: str | None = None
    ignore: bool = False

    def __post_init__(self):
        if (self.quad is None) == (self.box is None):
            raise ValueError("TextInstance needs exactly one of quad or box")

    @property
    def bbox(self) -> Box:
        if self.box is not None:
            return self.box
        xs = [p[0] for p in self.quad]
        ys = [p[1] for p in self.quad]
        return Box(min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))

    def pixel_rect(self, width: int, height: int) -> Rect:
        return self.bbox.pixel_rect(width, height)

    @property
    def is_tampered(self) -> bool:
        return self.label == Label.TAMPERED

    def relabeled(self, label: str) -> "TextInstance":
        return replace(self, label=label)

    def scaled(self, sx: float, sy: float) -> "TextInstance":
        if self.box is not None:
            return replace(self, box=self.box.scaled(sx, sy))
        return replace(self, quad=tuple((x * sx, y * sy) for x, y in self.quad))


@dataclass(frozen=True)
class ManifestRecord:
    image: str
    width: int
    height: int
    instances: tuple[TextInstance, ...] = ()

    @property
    def has_tampered(self) -> bool:
        return any(instance.is_tampered for instance in self.instances)


@dataclass
class Manifest:
    records: list[ManifestRecord] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def by_image(self) -> dict[str, ManifestRecord]:
        return {record.image: record for record in self.records}

    def __len__(self) -> int:
        return len(self.records)


@dataclass
class Session:
    name: str
    tampering_method: str
    source_dataset: str
    train_manifest: Manifest
    test_manifest: Manifest


@dataclass(frozen=True)
class SplitStats:
    images_authentic: int = 0
    images_tampered: int = 0
    instances_authentic: int = 0
    instances_tampered: int = 0

    def __add__(self, other: "SplitStats") -> "SplitStats":
        return SplitStats(
            self.images_authentic + other.images_authentic,
            self.images_tampered + other.images_tampered,
            self.instances_authentic + other.instances_authentic,
            self.instances_tampered + other.instances_tampered,
        )

    @property
    def images(self) -> int:
        return self.images_authentic + self.images_tampered

    @property
    def instances(self) -> int:
        return self.instances_authentic + self.instances_tampered


@dataclass(frozen=True)
class DatasetStats:
    train: SplitStats = SplitStats()
    test: SplitStats = SplitStats()

    def __add__(self, other: "DatasetStats") -> "DatasetStats":
        return DatasetStats(self.train + other.train, self.test + other.test)

    @property
    def images(self) -> int:
        return self.train.images + self.test.images

    @property
    def tampered_images(self) -> int:
        return self.train.images_tampered + self.test.images_tampered

    @property
    def instances(self) -> int:
        return self.train.instances + self.test.instances

    @property
    def tampered_instances(self) -> int:
        return self.train.instances_tampered + self.test.instances_tampered

    def as_dict(self) -> dict:
        return {
            split: {
                "images_authentic": stats.images_authentic,
                "images_tampered": stats.images_tampered,
                "instances_authentic": stats.instances_authentic,
                "instances_tampered": stats.instances_tampered,
            }
            for split, stats in (("train", self.train), ("test", self.test))
        }
