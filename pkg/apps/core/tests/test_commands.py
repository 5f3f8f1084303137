import json
import logging
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError


def test_pretty_output_is_indented(sample_dataset):
    root, _ = sample_dataset
    out = StringIO()
    call_command("validate", "--manifest", str(root / "manifest.jsonl"), "--pretty", stdout=out)
    assert out.getvalue().startswith("{\n  ")
    assert json.loads(out.getvalue())["errors"] == 0


def test_resolved_config_is_logged(sample_dataset, app_logs):
    root, _ = sample_dataset
    with app_logs.at_level(logging.INFO, logger="apps"):
        call_command("validate", "--manifest", str(root / "manifest.jsonl"), stdout=StringIO())
    assert "Running validate with config" in app_logs.text
    assert '"threads": 1' in app_logs.text


def test_log_level_flag_sets_app_logger(sample_dataset):
    root, _ = sample_dataset
    logger = logging.getLogger("apps")
    previous = logger.level
    try:
        call_command(
            "validate",
            "--manifest",
            str(root / "manifest.jsonl"),
            "--log-level",
            "ERROR",
            stdout=StringIO(),
        )
        assert logger.level == logging.ERROR
    finally:
        logger.setLevel(previous)


def test_threads_must_be_positive(sample_dataset):
    root, _ = sample_dataset
    with pytest.raises(CommandError) as excinfo:
        call_command(
            "validate",
            "--manifest",
            str(root / "manifest.jsonl"),
            "--threads",
            "-2",
            stdout=StringIO(),
        )
    assert excinfo.value.returncode == 2


def test_threads_default_from_settings(settings, sample_dataset, app_logs):
    settings.TOOLKIT_THREADS = 3
    root, _ = sample_dataset
    with app_logs.at_level(logging.INFO, logger="apps"):
        call_command("validate", "--manifest", str(root / "manifest.jsonl"), stdout=StringIO())
    assert '"threads": 3' in app_logs.text
