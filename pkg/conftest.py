"""
Shared pytest fixtures for all tests in the toolkit.

These fixtures provide deterministic images, annotations and on-disk sample datasets
that are reused across the app test modules.
"""

import logging

import numpy as np
import pytest

from apps.dataset.samples import write_sample_dataset
from apps.dataset.types import Box, Label, TextInstance


@pytest.fixture
def rng():
    """
    Provides a seeded numpy generator.

    Returns:
        numpy.random.Generator seeded with a fixed value
    """
    return np.random.default_rng(1234)


@pytest.fixture
def textured_image(rng):
    """
    A 48x64 RGB image with a smooth gradient plus sensor-like noise.

    Returns:
        uint8 array of shape (48, 64, 3)
    """
    yy, xx = np.mgrid[0:48, 0:64].astype(np.float64)
    base = 60.0 + 2.0 * xx[..., None] + 1.5 * yy[..., None]
    noisy = base + rng.normal(0.0, 12.0, (48, 64, 3))
    return np.rint(np.clip(noisy, 0, 255)).astype(np.uint8)


@pytest.fixture
def make_instance():
    """
    Factory for box-geometry text instances.

    Returns:
        Callable (x, y, w, h, label="authentic") -> TextInstance
    """

    def _make(x, y, w, h, label=Label.AUTHENTIC, transcription=None):
        return TextInstance(label=label, box=Box(x, y, w, h), transcription=transcription)

    return _make


@pytest.fixture
def sample_dataset(tmp_path):
    """
    Writes four synthetic scenes under a temporary directory.

    Returns:
        Tuple (dataset directory, Manifest); images live in ``<dir>/images``
    """
    root = tmp_path / "samples"
    manifest = write_sample_dataset(root, count=4, seed=7, width=160, height=120, texts=5)
    return root, manifest


@pytest.fixture
def app_logs(caplog, monkeypatch):
    """
    caplog for the ``apps`` logger tree, which does not propagate to root by default.

    Returns:
        The pytest caplog fixture
    """
    monkeypatch.setattr(logging.getLogger("apps"), "propagate", True)
    return caplog
