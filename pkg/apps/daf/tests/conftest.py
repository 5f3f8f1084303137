import numpy as np
import pytest

from apps.daf.types import FeatureBatch


@pytest.fixture
def make_batch():
    """
    Factory for feature batches; the global vector defaults to the row mean.

    Returns:
        Callable (roi_rows, tampered_flags, global_vector=None) -> FeatureBatch
    """

    def _make(rows, tampered, global_vector=None):
        roi = np.asarray(rows, dtype=np.float64)
        glob = roi.mean(axis=0) if global_vector is None else global_vector
        return FeatureBatch(roi_vectors=roi, global_vector=glob, labels=np.asarray(tampered))

    return _make
