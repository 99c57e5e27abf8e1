"""Counter-based random streams (Philox4x64-10).

Every random word is a pure function of ``(key, counter)``, so the increment
used by path ``j`` at step ``n`` never depends on how many other paths were
simulated, on early exit, or on thread scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_MASK32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S12 = np.uint64(12)
_TWO_M52 = 1.0 / 4503599627370496.0


@nb.njit(cache=True, inline="always")
def _mulhilo(a, b):
    a_lo = a & _MASK32
    a_hi = a >> _S32
    b_lo = b & _MASK32
    b_hi = b >> _S32
    ll = a_lo * b_lo
    lh = a_lo * b_hi
    hl = a_hi * b_lo
    hh = a_hi * b_hi
    mid = (ll >> _S32) + (lh & _MASK32) + (hl & _MASK32)
    hi = hh + (lh >> _S32) + (hl >> _S32) + (mid >> _S32)
    return hi, a * b


@nb.njit(cache=True)
def philox4x64(c0, c1, c2, c3, k0, k1):
    """Ten Philox rounds on a 256-bit counter with a 128-bit key."""
    for _ in range(10):
        hi0, lo0 = _mulhilo(_M0, c0)
        hi1, lo1 = _mulhilo(_M1, c2)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = k0 + _W0
        k1 = k1 + _W1
    return c0, c1, c2, c3


@nb.njit(cache=True, inline="always")
def to_unit_open(x):
    """Map a 64-bit word to a double in the open interval (0, 1)."""
    return (np.float64(x >> _S12) + 0.5) * _TWO_M52


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return x ^ (x >> 31)


@dataclass(frozen=True)
class RngStreamConfig:
    seed: int
    stream_count: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        if self.stream_count < 1:
            raise ValueError(f"stream_count must be positive, got {self.stream_count}")

    def stream_key(self, index: int) -> tuple[int, int]:
        """Philox key of substream ``index``; depends only on (seed, index)."""
        if not 0 <= index < self.stream_count:
            raise IndexError(f"stream {index} outside [0, {self.stream_count})")
        k0 = _splitmix64(self.seed ^ _splitmix64(index))
        k1 = _splitmix64(k0 ^ (index + 0x632BE59BD9B4E019))
        return k0, k1

    def partition(self, paths: int) -> list[tuple[int, int]]:
        """Split ``paths`` into contiguous per-stream counts (first streams get the remainder)."""
        base, extra = divmod(paths, self.stream_count)
        return [(i, base + (1 if i < extra else 0)) for i in range(self.stream_count)]
