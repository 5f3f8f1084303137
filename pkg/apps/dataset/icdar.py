"""
ICDAR-style ground-truth importer.

Accepts one text file per image, one instance per line, in either the 4-point form
``x1,y1,x2,y2,x3,y3,x4,y4,transcription`` (ICDAR 2015 / Tampered-IC13) or the 2-point
form ``left,top,right,bottom,transcription`` (ICDAR 2013, comma or space separated).
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from apps.core.exceptions import CodecError, EmptyManifestError, ToolkitError
from apps.dataset.types import Box, Label, Manifest, ManifestRecord, TextInstance
from apps.imaging.io import image_size

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = (".jpg", ".jpeg", ".png", ".bmp", ".JPG", ".JPEG", ".PNG")

DONT_CARE = "###"

_NUM = r"(-?\d+(?:\.\d+)?)"
_SEP = r"\s*[,\s]\s*"
QUAD_LINE = re.compile(r"^\s*" + _SEP.join([_NUM] * 8) + r"(?:" + _SEP + r"(.*))?$")
BOX_LINE = re.compile(r"^\s*" + _SEP.join([_NUM] * 4) + r"(?:" + _SEP + r"(.*))?$")


@dataclass
class ImportReport:
    warnings: list[str] = field(default_factory=list)
    files: int = 0


def _clean_transcription(text):
    if text is None:
        return None
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] == '"':
        text = text[1:-1]
    return text


def _clamp(value, upper):
    return min(max(value, 0.0), float(upper))


def parse_gt_line(line: str, width: int, height: int) -> TextInstance | None:
    """
    Parse one ground-truth line; coordinates are clamped into the image.

    Returns:
        TextInstance (labelled authentic; ``###`` transcriptions are don't-care regions),
        or None if the line is not parseable.
    """
    line = line.lstrip("\ufeff").rstrip("\r\n")
    match = QUAD_LINE.match(line)
    if match:
        coords = [float(value) for value in match.groups()[:8]]
        quad = tuple(
            (_clamp(coords[i], width), _clamp(coords[i + 1], height)) for i in range(0, 8, 2)
        )
        transcription = _clean_transcription(match.group(9))
        return TextInstance(
            label=Label.AUTHENTIC,
            quad=quad,
            transcription=transcription,
            ignore=transcription == DONT_CARE,
        )
    match = BOX_LINE.match(line)
    if match:
        left, top, right, bottom = (float(value) for value in match.groups()[:4])
        left, right = _clamp(min(left, right), width), _clamp(max(left, right), width)
        top, bottom = _clamp(min(top, bottom), height), _clamp(max(top, bottom), height)
        transcription = _clean_transcription(match.group(5))
        return TextInstance(
            label=Label.AUTHENTIC,
            box=Box(left, top, right - left, bottom - top),
            transcription=transcription,
            ignore=transcription == DONT_CARE,
        )
    return None


def _find_image(images_dir: Path, stem: str) -> Path | None:
    for candidate in (stem, stem.removeprefix("gt_")):
        for suffix in IMAGE_SUFFIXES:
            path = images_dir / f"{candidate}{suffix}"
            if path.exists():
                return path
    return None


def import_icdar_gt(gt_dir, images_dir, report: ImportReport | None = None) -> Manifest:
    """
    Build a manifest (all instances authentic) from a ground-truth directory.

    Malformed lines and ground-truth files without a matching image are reported and skipped.

    Raises:
        ToolkitError: a directory is unreadable.
        EmptyManifestError: nothing parseable was found.
    """
    gt_dir, images_dir = Path(gt_dir), Path(images_dir)
    report = report if report is not None else ImportReport()
    if not gt_dir.is_dir() or not images_dir.is_dir():
        missing = gt_dir if not gt_dir.is_dir() else images_dir
        raise ToolkitError(f"Unreadable directory: {missing}")

    records = []
    for gt_path in sorted(gt_dir.glob("*.txt")):
        image_path = _find_image(images_dir, gt_path.stem)
        if image_path is None:
            report.warnings.append(f"{gt_path.name}: no matching image in {images_dir}")
            continue
        try:
            width, height = image_size(image_path)
        except CodecError as exc:
            report.warnings.append(str(exc))
            continue

        instances = []
        with gt_path.open("r", encoding="utf-8-sig", errors="replace") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                instance = parse_gt_line(line, width, height)
                if instance is None:
                    where = f"{gt_path.name}:{line_no}"
                    report.warnings.append(f"{where}: malformed line {line.strip()!r}")
                    continue
                instances.append(instance)

        report.files += 1
        records.append(
            ManifestRecord(
                image=image_path.relative_to(images_dir).as_posix(),
                width=width,
                height=height,
                instances=tuple(instances),
            )
        )

    for warning in report.warnings:
        logger.warning(warning)
    if not records:
        raise EmptyManifestError(f"No parseable ground truth in {gt_dir}")
    return Manifest(records=records, metadata={"source": "icdar", "gt_dir": str(gt_dir)})
