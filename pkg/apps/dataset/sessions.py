"""
Session registry: a JSON object mapping each OSTF session name to its manifests.

    {"DST": {"train": "dst/train.jsonl", "test": "dst/test.jsonl"}, ...}

Relative paths are resolved against the registry file's directory.
"""

import json
import logging
from pathlib import Path

from apps.core.exceptions import ConfigurationError, RecordError
from apps.core.serializers import validate_payload
from apps.dataset.constants import SESSION_METHODS, SESSION_NAMES, SOURCE_DATASETS
from apps.dataset.manifest import load_manifest
from apps.dataset.serializers import SessionEntrySerializer
from apps.dataset.types import Manifest, Session

logger = logging.getLogger(__name__)


def read_registry(path) -> dict[str, dict]:
    """
    Validate the registry file and return resolved entries keyed by session name.

    Raises:
        ConfigurationError: unreadable file, unknown session names, malformed entries.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"Cannot read session registry {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path}: registry must be a JSON object")

    unknown = sorted(set(raw) - set(SESSION_NAMES))
    if unknown:
        raise ConfigurationError(f"{path}: unknown session name(s) {unknown}")

    entries = {}
    for name in SESSION_NAMES:
        if name not in raw:
            continue
        try:
            entry = validate_payload(SessionEntrySerializer, raw[name], f"{path}:{name}")
        except RecordError as exc:
            raise ConfigurationError(str(exc)) from exc
        entries[name] = {
            "train": (path.parent / entry["train"]).resolve(),
            "test": (path.parent / entry["test"]).resolve(),
            "tampering_method": entry.get("tampering_method", SESSION_METHODS[name]),
            "source_dataset": entry.get("source_dataset", SOURCE_DATASETS[name]),
        }
    return entries


def load_session_registry(path, splits=("train", "test")) -> list[Session]:
    """
    Load every registered session in canonical order.

    Args:
        splits: Which manifests to read; the others are left empty (the matrix only
            needs test manifests).
    """
    sessions = []
    for name, entry in read_registry(path).items():
        manifests = {
            split: load_manifest(entry[split]) if split in splits else Manifest()
            for split in ("train", "test")
        }
        sessions.append(
            Session(
                name=name,
                tampering_method=entry["tampering_method"],
                source_dataset=entry["source_dataset"],
                train_manifest=manifests["train"],
                test_manifest=manifests["test"],
            )
        )
    logger.info("Loaded %d session(s) from %s", len(sessions), path)
    return sessions
