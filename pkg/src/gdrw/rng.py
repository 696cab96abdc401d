"""Seedable multi-stream uniform random number generation.

Every output is a pure function of (master_seed, stream_id, counter): a
stream derives a 64-bit base state by hashing the seed and stream id, and
draw n is the SplitMix64 finalizer applied to base + n * GAMMA.  That gives
random access by counter (no sequential state to replay), cheap forking into
arbitrarily many streams, and full reproducibility of any consumer that
records which stream ids it used.

The same constants are compiled into the numba kernels (see _kernels.py);
tests assert the two implementations agree draw for draw.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MASK64 = (1 << 64) - 1

# SplitMix64 increment and finalizer multipliers (Stafford mix13).
GAMMA = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB

# Decorrelates stream ids from each other before mixing with the seed.
ID_SALT = 0x5851F42D4C957F2D


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * MIX_B) & _MASK64
    return z ^ (z >> 31)


def stream_base(master_seed: int, stream_id: int) -> int:
    """64-bit base state of one stream; draw n is mix64(base + n*GAMMA)."""
    return mix64(mix64((master_seed + GAMMA) & _MASK64) ^ mix64((stream_id ^ ID_SALT) & _MASK64))


def u64_at(base: int, counter: int) -> int:
    return mix64((base + counter * GAMMA) & _MASK64)


@dataclass
class RngStream:
    """One independent stream of uniform 32-bit integers.

    next_u32() advances the counter; u32_at() is the pure random-access
    form.  Streams carry no shared state, so they can be handed to any
    worker.
    """

    master_seed: int
    stream_id: int
    counter: int = 0
    _base: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._base = stream_base(self.master_seed, self.stream_id)

    def u32_at(self, counter: int) -> int:
        """Draw at an explicit counter without touching stream state."""
        return u64_at(self._base, counter) >> 32

    def next_u32(self) -> int:
        """Uniform on [0, 2^32 - 1]; advances the counter by one."""
        value = self.u32_at(self.counter)
        self.counter += 1
        return value


def fork_streams(master_seed: int, base_id: int, k: int) -> list[RngStream]:
    """k independent streams with ids base_id*k .. base_id*k + k - 1."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return [RngStream(master_seed, base_id * k + j) for j in range(k)]


# -- vectorized forms used by generators and the sampling engines -----------

_U = np.uint64


def mix64_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> _U(30)
    z *= _U(MIX_A)
    z ^= z >> _U(27)
    z *= _U(MIX_B)
    z ^= z >> _U(31)
    return z


def stream_bases(master_seed: int, stream_ids: np.ndarray) -> np.ndarray:
    seed_mix = _U(mix64((master_seed + GAMMA) & _MASK64))
    return mix64_array(mix64_array(stream_ids.astype(np.uint64) ^ _U(ID_SALT)) ^ seed_mix)


def u32_array(master_seed: int, stream_id: int, counters: np.ndarray) -> np.ndarray:
    """Vectorized u32_at for one stream over an array of counters."""
    base = _U(stream_base(master_seed, stream_id))
    z = counters.astype(np.uint64) * _U(GAMMA) + base
    return mix64_array(z) >> _U(32)
