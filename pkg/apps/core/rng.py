"""
Seed derivation helpers.

Every random decision in the toolkit is drawn from a numpy Generator whose seed is a pure
function of user-visible inputs, so results do not depend on scheduling order.
"""

import hashlib

import numpy as np

from apps.core.constants import SEED_BITS


def derive_seed(*parts) -> int:
    """
    Hash arbitrary printable parts into an unsigned 64-bit seed.

    Args:
        *parts: Values whose ``str()`` forms identify the stream (e.g. global seed, image id).

    Returns:
        Integer in [0, 2**64).
    """
    digest = hashlib.blake2b(
        "\x1f".join(str(part) for part in parts).encode("utf-8"),
        digest_size=SEED_BITS // 8,
    ).digest()
    return int.from_bytes(digest, "little")


def generator_for(*parts) -> np.random.Generator:
    return np.random.default_rng(derive_seed(*parts))


def draw_seed(rng: np.random.Generator) -> int:
    """Draw a fresh 64-bit seed from an existing generator."""
    return int(rng.integers(0, 2**SEED_BITS, dtype=np.uint64))
