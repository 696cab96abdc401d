"""Trace-driven simulator for two walk-specific memory strategies.

Random walks hammer two arrays with very different patterns: the per-vertex
offset table (row_index) is hit at a random vertex every step, and the
neighbor array (col_index) is read as one variable-length sequential run per
step.  This module models

* a direct-mapped cache over the offset table whose replacement policy is
  degree aware: on a miss the incoming vertex only evicts the resident line
  if its degree is strictly higher (high-degree vertices are revisited far
  more often, so they are worth pinning), with a plain always-replace
  direct-mapped cache as the baseline; and
* a dynamic burst schedule for neighbor loads: a c-byte request is split
  into floor(c/S1) long bursts plus ceil((c - floor(c/S1)*S1)/S2) short
  bursts, which bounds the over-fetched bytes below S2 per request.

The caches are pure policy simulators: they return correct data and count
hits and misses, they do not claim software speedups.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, TraceValidationError
from .graph import CsrGraph
from .walkers import Termination, WalkResult

DEFAULT_CACHE_LINES = 4096  # enough lines for every vertex of a small graph
DEFAULT_RECORD_BYTES = 8    # one neighbor record: u32 id + u32 weight slot
DEFAULT_LONG_BURST = 32     # burst lengths in records; best desk-scale pairing
DEFAULT_SHORT_BURST = 1


@dataclass
class CacheAccess:
    hit: bool
    offset: int
    degree: int


class _DirectMappedBase:
    """Direct-mapped (tag, offset, degree) cache over the vertex offset table."""

    def __init__(self, capacity: int = DEFAULT_CACHE_LINES):
        if capacity < 1 or capacity & (capacity - 1):
            raise ConfigError(f"capacity must be a power of two, got {capacity}")
        self.capacity = capacity
        self._tag_shift = capacity.bit_length() - 1
        self.tags = np.full(capacity, -1, dtype=np.int64)  # -1 marks an empty line
        self.offsets = np.zeros(capacity, dtype=np.int64)
        self.degrees = np.zeros(capacity, dtype=np.int64)
        self.hits = 0
        self.misses = 0

    def _replace_on_miss(self, resident_degree: int, incoming_degree: int) -> bool:
        raise NotImplementedError

    def access(self, v: int, graph: CsrGraph) -> CacheAccess:
        """Look up vertex v; on a miss fetch from the graph, return the data,
        and apply the replacement policy.  Empty lines are always filled."""
        line = v & (self.capacity - 1)
        tag = v >> self._tag_shift
        if self.tags[line] == tag:
            self.hits += 1
            return CacheAccess(True, int(self.offsets[line]), int(self.degrees[line]))
        self.misses += 1
        offset = int(graph.row_index[v])
        degree = int(graph.row_index[v + 1]) - offset
        if self.tags[line] < 0 or self._replace_on_miss(int(self.degrees[line]), degree):
            self.tags[line] = tag
            self.offsets[line] = offset
            self.degrees[line] = degree
        return CacheAccess(False, offset, degree)

    @property
    def miss_ratio(self) -> float:
        total = self.hits + self.misses
        return self.misses / total if total else 0.0


class DegreeAwareCache(_DirectMappedBase):
    """Evicts the resident line only for a strictly higher-degree vertex;
    equal degrees retain the resident to minimize churn."""

    def _replace_on_miss(self, resident_degree: int, incoming_degree: int) -> bool:
        return incoming_degree > resident_degree


class DirectMappedCache(_DirectMappedBase):
    """Standard direct-mapped baseline: always replaces on a miss."""

    def _replace_on_miss(self, resident_degree: int, incoming_degree: int) -> bool:
        return True


def dac_access(cache: DegreeAwareCache, v: int, graph: CsrGraph) -> CacheAccess:
    return cache.access(v, graph)


def dmc_access(cache: DirectMappedCache, v: int, graph: CsrGraph) -> CacheAccess:
    return cache.access(v, graph)


@dataclass
class BurstPlan:
    """Decomposition of one c-byte load into long and short bursts."""

    n_long: int
    n_short: int
    bytes_loaded: int
    bytes_valid: int


def burst_plan(c: int, s1: int, s2: int) -> BurstPlan:
    """Schedule a c-byte sequential load over long (s1-byte) and short
    (s2-byte) burst pipelines.

    bytes_loaded comes out as ceil(c/s2)*s2, so at most s2 - 1 fetched bytes
    go unused.
    """
    if s2 < 1 or s1 < s2:
        raise ConfigError(f"need s1 >= s2 >= 1, got s1={s1} s2={s2}")
    if s1 % s2:
        raise ConfigError(f"s1 must be a multiple of s2, got s1={s1} s2={s2}")
    if c < 0:
        raise ConfigError(f"request size must be nonnegative, got {c}")
    n_long = c // s1
    rest = c - n_long * s1
    n_short = -(-rest // s2)
    return BurstPlan(n_long, n_short, n_long * s1 + n_short * s2, c)


@dataclass
class AccessTrace:
    """Replayable memory-access schedule derived from walk results.

    One entry per expanded vertex, in result order: an offset-table access to
    the vertex plus a neighbor load of degree * record_bytes bytes.  A
    completed walk never expands its final vertex; a dead-ended walk expanded
    every vertex on its path (the last expansion is what failed).
    """

    vertices: np.ndarray
    request_bytes: np.ndarray


def derive_trace(graph: CsrGraph, results: Sequence[WalkResult],
                 record_bytes: int = DEFAULT_RECORD_BYTES) -> AccessTrace:
    if record_bytes < 1:
        raise ConfigError(f"record_bytes must be >= 1, got {record_bytes}")
    parts = []
    for r in results:
        expanded = r.path if r.terminated == Termination.DEAD_END else r.path[:-1]
        parts.append(np.asarray(expanded, dtype=np.int64))
    vertices = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    degrees = graph.row_index[vertices + 1] - graph.row_index[vertices]
    return AccessTrace(vertices, degrees * record_bytes)


@dataclass
class MetricsReport:
    dac_miss_ratio: float
    dmc_miss_ratio: float
    valid_data_ratio: float
    n_long: int
    n_short: int
    bytes_loaded: int
    bytes_valid: int
    accesses: int

    def to_json(self, **kwargs) -> str:
        return json.dumps(asdict(self), **kwargs)


def _validate_results(graph: CsrGraph, results: Sequence[WalkResult]):
    # sorted (src, dst) keys; CSR order is already lexicographic
    src = np.repeat(np.arange(graph.num_vertices, dtype=np.uint64), graph.degrees)
    keys = src * np.uint64(graph.num_vertices) + graph.col_index.astype(np.uint64)
    for r in results:
        path = np.asarray(r.path, dtype=np.int64)
        if len(path) == 0:
            raise TraceValidationError(f"query {r.query_id}: empty path")
        if path.max(initial=0) >= graph.num_vertices or path.min(initial=0) < 0:
            raise TraceValidationError(
                f"query {r.query_id}: vertex id out of range for this graph")
        if len(path) > 1:
            want = path[:-1].astype(np.uint64) * np.uint64(graph.num_vertices) \
                + path[1:].astype(np.uint64)
            pos = np.searchsorted(keys, want)
            ok = (pos < len(keys)) & (keys[np.minimum(pos, max(len(keys) - 1, 0))] == want)
            if not ok.all():
                t = int(np.nonzero(~ok)[0][0])
                raise TraceValidationError(
                    f"query {r.query_id}: step {t} uses a nonexistent edge "
                    f"({int(path[t])}, {int(path[t + 1])})")


def simulate_trace(graph: CsrGraph, results: Sequence[WalkResult],
                   cache_lines: int = DEFAULT_CACHE_LINES,
                   s1: int = DEFAULT_LONG_BURST * DEFAULT_RECORD_BYTES,
                   s2: int = DEFAULT_SHORT_BURST * DEFAULT_RECORD_BYTES,
                   record_bytes: int = DEFAULT_RECORD_BYTES) -> MetricsReport:
    """Replay walk results through both cache policies and the burst
    scheduler; burst sizes are in bytes.

    Raises TraceValidationError when the results do not fit the graph.
    """
    _validate_results(graph, results)
    trace = derive_trace(graph, results, record_bytes)
    dac = DegreeAwareCache(cache_lines)
    dmc = DirectMappedCache(cache_lines)
    for v in trace.vertices.tolist():
        dac.access(v, graph)
        dmc.access(v, graph)
    n_long = n_short = loaded = valid = 0
    for c in trace.request_bytes.tolist():
        plan = burst_plan(c, s1, s2)
        n_long += plan.n_long
        n_short += plan.n_short
        loaded += plan.bytes_loaded
        valid += plan.bytes_valid
    return MetricsReport(
        dac_miss_ratio=dac.miss_ratio,
        dmc_miss_ratio=dmc.miss_ratio,
        valid_data_ratio=valid / loaded if loaded else 1.0,
        n_long=n_long,
        n_short=n_short,
        bytes_loaded=loaded,
        bytes_valid=valid,
        accesses=len(trace.vertices),
    )
