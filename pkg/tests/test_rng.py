import numpy as np
import pytest
from scipy import stats as sps

import gdrw._kernels as kernels
from gdrw import rng
from gdrw.stats import serial_correlation_z


def test_fork_ids():
    streams = rng.fork_streams(7, 0, 4)
    assert [s.stream_id for s in streams] == [0, 1, 2, 3]
    streams = rng.fork_streams(7, 5, 4)
    assert [s.stream_id for s in streams] == [20, 21, 22, 23]


def test_fork_requires_positive_k():
    with pytest.raises(ValueError):
        rng.fork_streams(7, 0, 0)


def test_same_stream_forked_twice_is_identical():
    a = rng.RngStream(123, 9)
    b = rng.RngStream(123, 9)
    assert [a.next_u32() for _ in range(100)] == [b.next_u32() for _ in range(100)]


def test_counter_replay_is_pure():
    s = rng.RngStream(1, 2)
    first = [s.next_u32() for _ in range(10)]
    assert [s.u32_at(i) for i in range(10)] == first
    assert s.counter == 10  # u32_at does not advance


def test_distinct_inputs_change_output():
    base = rng.RngStream(1, 2).u32_at(3)
    assert rng.RngStream(2, 2).u32_at(3) != base
    assert rng.RngStream(1, 3).u32_at(3) != base
    assert rng.RngStream(1, 2).u32_at(4) != base


def test_range_is_32_bit():
    draws = rng.u32_array(42, 0, np.arange(10_000, dtype=np.uint64))
    assert draws.min() >= 0
    assert draws.max() <= 0xFFFFFFFF
    assert draws.max() > 0xF0000000  # actually spans the upper range


def test_vectorized_matches_scalar():
    s = rng.RngStream(99, 1234)
    vec = rng.u32_array(99, 1234, np.arange(200, dtype=np.uint64))
    assert vec.tolist() == [s.u32_at(i) for i in range(200)]


def test_kernel_rng_matches_python():
    master_mix = np.uint64(rng.mix64(42 + rng.GAMMA))
    counters = np.arange(200, dtype=np.uint64)
    got = kernels.u32_probe(master_mix, np.uint64(77), counters)
    want = rng.u32_array(42, 77, counters)
    assert np.array_equal(got, want.astype(np.uint64))


def test_uniformity_chi_square():
    # 10^6 draws into 256 equal buckets
    draws = rng.u32_array(42, 5, np.arange(1_000_000, dtype=np.uint64))
    counts = np.bincount((draws >> np.uint64(24)).astype(np.int64), minlength=256)
    p = sps.chisquare(counts).pvalue
    assert p > 0.001, f"uniformity rejected, p={p}"


def test_stream_pairwise_correlation():
    n = 1_000_000
    a = rng.u32_array(42, 0, np.arange(n, dtype=np.uint64)).astype(np.float64)
    b = rng.u32_array(42, 1, np.arange(n, dtype=np.uint64)).astype(np.float64)
    rho = np.corrcoef(a, b)[0, 1]
    assert abs(rho) < 0.01, f"streams correlated, rho={rho}"


def test_interleaved_serial_correlation():
    n = 500_000
    a = rng.u32_array(7, 0, np.arange(n, dtype=np.uint64))
    b = rng.u32_array(7, 1, np.arange(n, dtype=np.uint64))
    inter = np.empty(2 * n, dtype=np.float64)
    inter[0::2], inter[1::2] = a, b
    z = serial_correlation_z(inter)
    # two-sided normal test at significance 0.001
    assert abs(z) < 3.2905, f"serial correlation detected, z={z}"


def test_consecutive_draw_collisions_are_rare():
    draws = rng.u32_array(3, 0, np.arange(10_000, dtype=np.uint64))
    collisions = int((draws[:-1] == draws[1:]).sum())
    assert collisions / 10_000 < 1e-3
