import numpy as np
import pytest

from apps.core.exceptions import EmptyManifestError, ToolkitError
from apps.dataset.icdar import ImportReport, import_icdar_gt, parse_gt_line
from apps.dataset.types import Box, Label
from apps.imaging.io import save_image
from apps.imaging.types import blank


def test_parse_four_point_line():
    instance = parse_gt_line("10,10,50,10,50,30,10,30,HELLO", 100, 100)
    assert instance.quad == ((10, 10), (50, 10), (50, 30), (10, 30))
    assert instance.transcription == "HELLO"
    assert instance.label == Label.AUTHENTIC


def test_parse_two_point_line():
    instance = parse_gt_line("10,10,50,30,word", 100, 100)
    assert instance.box == Box(10, 10, 40, 20)
    assert instance.transcription == "word"


def test_parse_space_separated_icdar2013_line():
    instance = parse_gt_line('38 43 920 215 "Tiredness"\r\n', 1000, 500)
    assert instance.box == Box(38, 43, 882, 172)
    assert instance.transcription == "Tiredness"


def test_parse_clamps_and_strips_bom():
    instance = parse_gt_line("\ufeff-5,2,120,40,far", 100, 30)
    assert instance.box == Box(0, 2, 100, 28)


def test_dont_care_transcription_marks_ignored_region():
    quad = parse_gt_line("1,1,20,1,20,9,1,9,###", 100, 100)
    box = parse_gt_line('38 43 920 215 "###"', 1000, 500)
    assert quad.ignore and box.ignore
    assert quad.label == Label.AUTHENTIC
    assert not parse_gt_line("10,10,50,30,word", 100, 100).ignore


def test_parse_rejects_malformed_line():
    assert parse_gt_line("10,10,fifty,30,word", 100, 100) is None
    assert parse_gt_line("###", 100, 100) is None


@pytest.fixture
def icdar_dirs(tmp_path):
    """
    Ground-truth and image directories with two annotated images.

    Returns:
        Tuple (gt_dir, images_dir)
    """
    gt_dir = tmp_path / "gt"
    images_dir = tmp_path / "images"
    gt_dir.mkdir()
    save_image(blank(120, 80), images_dir / "img_1.png")
    save_image(blank(64, 64), images_dir / "img_2.png")
    (gt_dir / "gt_img_1.txt").write_text(
        "10,10,50,10,50,30,10,30,HELLO\n"
        "60,5,100,25,WORLD\n"
        "oops this is not ground truth\n"
        "1,1,20,1,20,9,1,9,###\n",
        encoding="utf-8",
    )
    (gt_dir / "img_2.txt").write_text("5,5,30,20,A\n", encoding="utf-8")
    (gt_dir / "img_3.txt").write_text("5,5,30,20,B\n", encoding="utf-8")
    return gt_dir, images_dir


def test_import_reports_malformed_lines_and_orphans(icdar_dirs):
    report = ImportReport()
    manifest = import_icdar_gt(*icdar_dirs, report)

    assert [record.image for record in manifest.records] == ["img_1.png", "img_2.png"]
    first = manifest.records[0]
    assert (first.width, first.height) == (120, 80)
    assert len(first.instances) == 3
    assert all(instance.label == Label.AUTHENTIC for instance in first.instances)
    assert [instance.ignore for instance in first.instances] == [False, False, True]
    assert report.files == 2
    assert len(report.warnings) == 2
    assert any("malformed" in warning for warning in report.warnings)
    assert any("img_3.txt" in warning for warning in report.warnings)


def test_import_without_parseable_records_raises(tmp_path):
    (tmp_path / "gt").mkdir()
    (tmp_path / "images").mkdir()
    with pytest.raises(EmptyManifestError):
        import_icdar_gt(tmp_path / "gt", tmp_path / "images")


def test_import_unreadable_directory_raises(tmp_path):
    with pytest.raises(ToolkitError):
        import_icdar_gt(tmp_path / "missing", tmp_path)
