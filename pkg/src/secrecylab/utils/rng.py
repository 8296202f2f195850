"""Counter-based random streams keyed on (seed, frame)."""

import hashlib
import struct

import numpy as np

_PERSONAL = b"secrecylab-rng"


def derive_key(seed: int, counter: int, label: str = "frame") -> int:
    """Derive a 128-bit Philox key from a seed, a counter and a stream label."""
    if seed < 0 or counter < 0:
        raise ValueError("seed and counter must be non-negative")
    digest = hashlib.blake2b(
        struct.pack("<QQ", seed & 0xFFFFFFFFFFFFFFFF, counter) + label.encode("utf-8"),
        digest_size=16,
        person=_PERSONAL[:16],
    ).digest()
    return int.from_bytes(digest, "little")


def frame_generator(seed: int, frame: int, label: str = "frame") -> np.random.Generator:
    """Generator whose output depends only on (seed, frame, label)."""
    return np.random.Generator(np.random.Philox(key=derive_key(seed, frame, label)))


def random_bits(rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.integers(0, 2, size=count, dtype=np.uint8)
