"""
Toolkit exception hierarchy.

Operations raise these; management commands translate them into exit statuses.
"""


class ToolkitError(Exception):
    """Base class for every error raised by the toolkit."""


class ParameterError(ToolkitError, ValueError):
    """An operation received an out-of-range or inconsistent argument."""


class ConfigurationError(ToolkitError):
    """A configuration object (jitter buckets, registry, settings) is unusable."""


class CodecError(ToolkitError):
    """Image encode/decode failed."""


class RecordError(ToolkitError):
    """A single input record (manifest line, prediction line) could not be used."""

    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record


class EmptyManifestError(ToolkitError):
    """An importer found no parseable records."""


class AggregationError(ToolkitError):
    """The 9x9 matrix is incomplete."""

    def __init__(self, missing):
        self.missing = sorted(missing)
        pairs = ", ".join(f"({train}, {test})" for train, test in self.missing)
        super().__init__(f"Missing {len(self.missing)} matrix cell(s): {pairs}")


class TrainingError(ToolkitError):
    """The toy trainer diverged."""

    def __init__(self, step, message="loss is not finite"):
        self.step = step
        super().__init__(f"Training diverged at step {step}: {message}")


class KinkError(ToolkitError):
    """A gradient check was requested on a non-differentiable point; re-sample the batch."""
