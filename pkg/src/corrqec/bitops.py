"""Bit-level helpers shared by the channel, code and oracle modules.

Convention used everywhere: bit j of an integer is coordinate j of the
GF(2) vector, and computational basis index i assigns qubit j the value
(i >> j) & 1.
"""
import numpy as np


def popcount(a) -> np.ndarray:
    """Hamming weight, elementwise, as int64."""
    return np.bitwise_count(np.asarray(a, dtype=np.uint64)).astype(np.int64)


def index_weights(n: int) -> np.ndarray:
    """Hamming weights of all basis indices 0 .. 2^n - 1."""
    return popcount(np.arange(1 << n, dtype=np.uint64))
