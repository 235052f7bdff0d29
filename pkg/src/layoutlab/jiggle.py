"""Deterministic sub-microscopic offsets used to break exact coincidences.

Force kernels divide by inter-node distance, so two nodes at the exact same
position are undefined. Instead of drawing from a shared RNG (which would make
results depend on evaluation order), each node index hashes to a fixed offset
in (-1e-6, 1e-6) per axis, never exactly zero. Same seed, same index, same
offset -- forever.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_AXIS_SALT = np.uint64(0xD6E8FEB86659FD93)

COINCIDENT_DIST = 1e-12
AMPLITUDE = 1e-6


def _splitmix64(x: np.ndarray) -> np.ndarray:
    # Modular 64-bit arithmetic: wraparound is intentional.
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = x + _GOLDEN
        x = (x ^ (x >> np.uint64(30))) * _MIX1
        x = (x ^ (x >> np.uint64(27))) * _MIX2
        return x ^ (x >> np.uint64(31))


def _to_signed_unit(h: np.ndarray) -> np.ndarray:
    # Odd 53-bit numerator keeps the result off both 0 and the interval ends.
    k = (h >> np.uint64(11)) | np.uint64(1)
    return k.astype(np.float64) * 2.0**-52 - 1.0


def jiggle_many(seed: int, indices: np.ndarray) -> np.ndarray:
    """Per-index offset vectors, shape (len(indices), 2), entries nonzero."""
    idx = np.asarray(indices, dtype=np.uint64)
    base = _splitmix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    hx = _splitmix64(idx ^ base)
    hy = _splitmix64(idx ^ base ^ _AXIS_SALT)
    out = np.empty((idx.size, 2), dtype=np.float64)
    out[:, 0] = _to_signed_unit(hx) * AMPLITUDE
    out[:, 1] = _to_signed_unit(hy) * AMPLITUDE
    return out


def jiggle(seed: int, index: int) -> np.ndarray:
    """Offset vector for a single node index."""
    return jiggle_many(seed, np.array([index], dtype=np.uint64))[0]


def pair_jiggle_many(seed: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Antisymmetric separation directions for coincident pairs.

    Returns jiggle(j) - jiggle(i), so swapping the pair flips the sign and
    the two nodes are pushed apart rather than dragged together.
    """
    return jiggle_many(seed, j) - jiggle_many(seed, i)


def pair_jiggle(seed: int, i: int, j: int) -> np.ndarray:
    return jiggle(seed, j) - jiggle(seed, i)
