import numpy as np
import pytest

from apps.dataset.types import Box, Label, TextInstance
from apps.jitter.config import build_config


@pytest.fixture
def jitter_config():
    """
    Factory for validated jitter configurations on top of the settings defaults.

    Returns:
        Callable (overrides=None, **fields) -> JitterConfig
    """
    return build_config


@pytest.fixture
def grid_scene():
    """
    A 220x100 mid-gray noisy image with ten 40x40 authentic text boxes in a 5x2 grid.

    Returns:
        Tuple (image, list of TextInstance)
    """
    rng = np.random.default_rng(99)
    img = np.rint(np.clip(128 + rng.normal(0, 8, (100, 220, 3)), 0, 255)).astype(np.uint8)
    instances = [
        TextInstance(label=Label.AUTHENTIC, box=Box(2 + 44 * col, 5 + 50 * row, 40, 40))
        for row in range(2)
        for col in range(5)
    ]
    return img, instances
