"""
JSON Lines helpers shared by manifests, predictions and recipes.
"""

import json
import logging
from pathlib import Path
from typing import Iterable, Iterator

from apps.core.exceptions import RecordError

logger = logging.getLogger(__name__)


def read_jsonl(path) -> Iterator[tuple[int, dict]]:
    """
    Yield ``(line_number, payload)`` for every non-blank line.

    Raises:
        RecordError: a line is not a JSON object.
    """
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                payload = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordError(f"{path}:{line_no}: invalid JSON ({exc.msg})") from exc
            if not isinstance(payload, dict):
                raise RecordError(f"{path}:{line_no}: expected a JSON object")
            yield line_no, payload


def write_jsonl(path, payloads: Iterable[dict]) -> int:
    """Write one compact, key-sorted JSON object per line. Returns the number of lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8") as fh:
        for payload in payloads:
            fh.write(json.dumps(payload, sort_keys=True, separators=(",", ":")))
            fh.write("\n")
            count += 1
    logger.debug("Wrote %d record(s) to %s", count, path)
    return count
