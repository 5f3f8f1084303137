"""
Manifest persistence: JSON Lines, one header line followed by one record per image.
"""

import logging
from pathlib import Path

from apps.core.constants import MANIFEST_SCHEMA, MANIFEST_VERSION
from apps.core.exceptions import RecordError
from apps.core.jsonl import read_jsonl, write_jsonl
from apps.core.serializers import validate_payload
from apps.dataset.serializers import ManifestHeaderSerializer, ManifestRecordSerializer
from apps.dataset.types import Manifest

logger = logging.getLogger(__name__)


def load_manifest(path) -> Manifest:
    """
    Load a manifest file.

    The header line is optional for hand-written files; when present it must carry the
    schema name and a supported version.

    Raises:
        RecordError: malformed header or record.
    """
    manifest = Manifest()
    for line_no, payload in read_jsonl(path):
        where = f"{path}:{line_no}"
        if "schema" in payload:
            if manifest.records:
                raise RecordError(f"{where}: header must be the first line")
            header = validate_payload(ManifestHeaderSerializer, payload, where)
            manifest.metadata = dict(header["metadata"])
            continue
        manifest.records.append(validate_payload(ManifestRecordSerializer, payload, where))
    logger.debug("Loaded %d record(s) from %s", len(manifest.records), path)
    return manifest


def manifest_lines(manifest: Manifest):
    yield {
        "schema": MANIFEST_SCHEMA,
        "version": MANIFEST_VERSION,
        "metadata": manifest.metadata,
    }
    for record in manifest.records:
        yield ManifestRecordSerializer(record).data


def save_manifest(manifest: Manifest, path) -> Path:
    write_jsonl(path, manifest_lines(manifest))
    return Path(path)
