"""Weighted reservoir sampling: sequential reference, block-parallel variant,
and the baseline samplers used as statistical oracles.

A single pass keeps one item: after i items, item i survives with
probability w_i / sum(w_1..w_i), which telescopes to a final selection
probability of w_i / sum(w) for every item.  The block variant consumes k
items at a time by adding the running total to a prefix sum of the block's
weights, testing every lane against its own random stream, and letting the
highest accepting lane win (identical to sequential overwrite order).

Acceptance is division free: with r* a 32-bit integer draw standing for
r = r*/(2^32 - 1), "probability > r" becomes the exact integer comparison

    2^32 * w > r* * (w_sum + w_ps) + w

evaluated in 128-bit arithmetic.  One quirk is inherited deliberately:
r* = 2^32 - 1 rejects even a guaranteed-acceptance lane, a bias of 2^-32 per
draw.

wrs_sequential / wrs_block_step are the readable reference path;
sample_index_many drives the same arithmetic through a compiled kernel for
the Monte Carlo suites (the tests pin the two paths to bit-identical
results).
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Optional, Sequence

import numpy as np

from . import _kernels, rng
from .errors import SamplingError

log = logging.getLogger(__name__)

_W_SUM_LIMIT = 1 << 63


@dataclass
class Reservoir:
    """Running state of one single-pass weighted selection."""

    selected: Optional[int] = None
    selected_index: Optional[int] = None
    w_sum: int = 0
    n_seen: int = 0


@dataclass
class WeightBlock:
    """Up to k (item, weight) lanes submitted to one block step.

    Lanes beyond ``fill`` are ignored by every operation.
    """

    items: Sequence[int]
    weights: Sequence[int]
    fill: int = field(default=-1)

    def __post_init__(self):
        if self.fill < 0:
            self.fill = len(self.items)
        if not 1 <= self.fill <= len(self.items) or self.fill > len(self.weights):
            raise ValueError(f"fill must be in [1, len(items)], got {self.fill}")


def selector_accepts(w: int, w_sum: int, w_ps: int, r_star: int, bits: int = 32) -> bool:
    """Division-free acceptance test for one lane.

    Exactly equivalent to w / (w_sum + w_ps) > r* / (2^bits - 1) up to the
    one-in-2^bits lattice quantization.  ``bits`` is 32 in production; the
    reduced-resolution form exists so tests can enumerate the whole r*
    lattice.
    """
    total = w_sum + w_ps
    if total > _W_SUM_LIMIT:
        raise OverflowError(f"weight sum {total} exceeds 2^63")
    return (w << bits) > r_star * total + w


def block_prefix_sum(block: WeightBlock) -> list[int]:
    """Inclusive prefix sums of the block's first ``fill`` weights."""
    return list(accumulate(int(w) for w in block.weights[:block.fill]))


def wrs_block_step(reservoir: Reservoir, block: WeightBlock,
                   streams: Sequence[rng.RngStream]) -> Reservoir:
    """Consume one block: lane j draws from streams[j], accepting lanes are
    resolved latest-index-wins, and the running weight sum advances by the
    block total.  Zero-weight lanes still draw, so random number consumption
    is data independent."""
    if len(streams) < block.fill:
        raise ValueError(f"need {block.fill} streams, got {len(streams)}")
    prefix = block_prefix_sum(block)
    winner = None
    for j in range(block.fill):
        r = streams[j].next_u32()
        if selector_accepts(int(block.weights[j]), reservoir.w_sum, prefix[j], r):
            winner = j
    if winner is not None:
        reservoir.selected = int(block.items[winner])
        reservoir.selected_index = reservoir.n_seen + winner
    reservoir.w_sum += prefix[-1]
    reservoir.n_seen += block.fill
    if log.isEnabledFor(logging.DEBUG):
        log.debug("block step: selected=%s index=%s w_sum=%d n_seen=%d",
                  reservoir.selected, reservoir.selected_index,
                  reservoir.w_sum, reservoir.n_seen)
    return reservoir


def wrs_sequential(item_weights, stream: rng.RngStream) -> Reservoir:
    """Single-pass reference: one (item, weight) at a time, one draw each.

    After the full stream, item i is the selection with probability
    w_i / sum(w); the reservoir stays empty iff every weight was zero.
    """
    res = Reservoir()
    for item, w in item_weights:
        w = int(w)
        r = stream.next_u32()
        if selector_accepts(w, res.w_sum, w, r):
            res.selected = int(item)
            res.selected_index = res.n_seen
        res.w_sum += w
        res.n_seen += 1
        if res.w_sum > _W_SUM_LIMIT:
            raise OverflowError(f"accumulated weight {res.w_sum} exceeds 2^63")
    return res


def inverse_transform_sample(weights: Sequence[int], stream: rng.RngStream) -> int:
    """Cumulative-table baseline: build prefix sums, draw once, binary search.

    Statistically equivalent single-draw oracle for the reservoir path.
    """
    cum = list(accumulate(int(w) for w in weights))
    if not cum or cum[-1] <= 0:
        raise SamplingError("cannot sample from an all-zero weight vector")
    target = (stream.next_u32() * cum[-1]) >> 32
    return bisect.bisect_right(cum, target)


def exact_distribution(weights: Sequence[int]) -> np.ndarray:
    """Analytic selection probabilities w_i / sum(w) as float64 (each entry
    correctly rounded from the exact rational)."""
    total = sum(int(w) for w in weights)
    if total <= 0:
        raise SamplingError("cannot normalize an all-zero weight vector")
    return np.array([float(Fraction(int(w), total)) for w in weights], dtype=np.float64)


# -- compiled Monte Carlo engines -------------------------------------------

def sample_index_many(weights: Sequence[int], k: int, master_seed: int,
                      trials: int, base_id_start: int = 0) -> np.ndarray:
    """Selected stream position for ``trials`` independent runs of the block
    sampler (k lanes) over one weight vector; -1 where nothing was selected.

    Trial t uses the same lane streams a walk query with id
    base_id_start + t would, so results are reproducible and bit-identical
    to driving wrs_block_step by hand.
    """
    w = np.asarray(weights, dtype=np.uint64)
    if w.size and int(w.sum(dtype=object)) > _W_SUM_LIMIT:
        raise OverflowError("weight sum exceeds 2^63")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    out = np.empty(trials, dtype=np.int64)
    master_mix = np.uint64(rng.mix64(master_seed + rng.GAMMA))
    _kernels.sample_indices(w, k, master_mix, np.uint64(base_id_start), trials, out)
    return out


def inverse_transform_many(weights: Sequence[int], master_seed: int,
                           stream_id: int, trials: int) -> np.ndarray:
    """Vectorized inverse-transform sampling: ``trials`` draws from one stream."""
    w = np.asarray(weights, dtype=np.uint64)
    cum = np.cumsum(w, dtype=np.uint64)
    total = int(cum[-1]) if w.size else 0
    if total <= 0:
        raise SamplingError("cannot sample from an all-zero weight vector")
    r = rng.u32_array(master_seed, stream_id, np.arange(trials, dtype=np.uint64))
    # (r * total) >> 32 without overflowing u64: split total into 32-bit limbs
    t_hi = np.uint64(total >> 32)
    t_lo = np.uint64(total & 0xFFFFFFFF)
    target = r * t_hi + ((r * t_lo) >> np.uint64(32))
    return np.searchsorted(cum, target, side="right").astype(np.int64)
