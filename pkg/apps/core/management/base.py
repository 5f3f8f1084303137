"""
Shared base for every toolkit management command.

Owns the global flags (--seed, --threads, --log-level, --pretty), logs the resolved
configuration before running, and maps toolkit errors onto exit statuses:

- 0: no error-severity events
- 1: an operation failed (or per-record failures were counted)
- 2: usage error
"""

import json
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import ToolkitError

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


class UsageError(CommandError):
    def __init__(self, message):
        super().__init__(message, returncode=2)


class ToolkitCommand(BaseCommand):
    """
    Subclasses implement ``add_command_arguments`` and ``run``.

    ``run`` returns the payload to print (or None) and may set ``self.failures`` to
    request exit status 1 after the payload has been written.
    """

    def add_arguments(self, parser):
        parser.add_argument("--seed", type=int, default=None, help="Global seed.")
        parser.add_argument(
            "--threads",
            type=int,
            default=None,
            help="Worker threads (env TEXTFORENSICS_THREADS).",
        )
        parser.add_argument(
            "--log-level",
            choices=LOG_LEVELS,
            default=None,
            help="Log level (env TEXTFORENSICS_LOG_LEVEL).",
        )
        parser.add_argument(
            "--pretty", action="store_true", help="Indented, human-oriented output."
        )
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        options["threads"] = options["threads"] or settings.TOOLKIT_THREADS
        if options["threads"] < 1:
            raise UsageError("--threads must be >= 1")
        options["log_level"] = options["log_level"] or settings.TOOLKIT_LOG_LEVEL
        logging.getLogger("apps").setLevel(options["log_level"])

        self.pretty = options["pretty"]
        self.failures = 0
        logger.info(
            "Running %s with config %s", self.command_name(), self.describe(options)
        )

        try:
            payload = self.run(**options)
        except ToolkitError as exc:
            logger.error("%s failed: %s", self.command_name(), exc)
            raise CommandError(str(exc), returncode=1) from exc

        if payload is not None:
            self.emit(payload)
        if self.failures:
            raise CommandError(
                f"{self.failures} error-severity event(s); see log", returncode=1
            )

    def run(self, **options):
        raise NotImplementedError

    def command_name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]

    @staticmethod
    def describe(options) -> str:
        skip = {
            "stdout",
            "stderr",
            "skip_checks",
            "no_color",
            "force_color",
            "traceback",
            "settings",
            "pythonpath",
        }
        resolved = {
            key: str(value) if isinstance(value, Path) else value
            for key, value in sorted(options.items())
            if key not in skip
        }
        return json.dumps(resolved, sort_keys=True, default=str)

    def emit(self, payload):
        if self.pretty:
            self.stdout.write(json.dumps(payload, indent=2, sort_keys=True, default=str))
        else:
            self.stdout.write(json.dumps(payload, sort_keys=True, default=str))

    @staticmethod
    def require_path(value, flag, must_exist=True, is_dir=None) -> Path:
        if value is None:
            raise UsageError(f"{flag} is required")
        path = Path(value)
        if must_exist and not path.exists():
            raise UsageError(f"{flag}: {path} does not exist")
        if is_dir is True and must_exist and not path.is_dir():
            raise UsageError(f"{flag}: {path} is not a directory")
        return path
