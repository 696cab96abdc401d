"""Dynamic random walk engine: per-application weight updates, the fused
neighbor-scan/sample step, query lifecycle, batch execution, and
stationary-distribution statistics.

Each step streams the current vertex's neighbors through an
application-specific weight function straight into the block reservoir
sampler, so a step costs one pass over the adjacency list and O(1) extra
state.  Two applications are built in:

* relation-constrained walks (``MetaPath``): an edge keeps its weight only
  when its relation id matches the step's expected relation, otherwise it
  gets weight zero and can never be sampled;
* second-order biased walks (``Node2Vec``): an edge back to the previous
  vertex is scaled by 1/p, an edge to a vertex adjacent to the previous one
  keeps its weight, and everything else is scaled by 1/q.

Every query owns its random streams, derived from (master_seed, query id),
so batch results are a pure function of the inputs regardless of worker
count or execution order.  run_batch defaults to a compiled engine that is
bit-identical to the pure-Python reference (enforced by tests); pass
engine="reference" to force the scalar path.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernels, rng
from .errors import ConfigError
from .fixedpoint import scaled_div
from .graph import CsrGraph, has_edge, neighbors_info
from .sampler import Reservoir, WeightBlock, wrs_block_step

DEFAULT_BLOCK_WIDTH = 16

# Keeps 2*w*den + num inside uint64 for raw weights up to 2^48.
_MAX_RATIONAL_TERM = 1 << 12

_SHUFFLE_STREAM = (1 << 56) + 2


@dataclass(frozen=True)
class MetaPath:
    """Relation sequence constraint; shorter sequences repeat cyclically."""

    relations: tuple[int, ...]

    def __post_init__(self):
        rels = tuple(int(r) for r in self.relations)
        if not rels:
            raise ConfigError("relation sequence must not be empty")
        if any(not 0 <= r < 1 << 16 for r in rels):
            raise ConfigError("relation ids must fit in 16 bits")
        object.__setattr__(self, "relations", rels)

    def expected(self, t: int) -> int:
        return self.relations[t % len(self.relations)]


@dataclass(frozen=True)
class Node2Vec:
    """Return parameter p and in-out parameter q, kept as exact rationals."""

    p: Fraction
    q: Fraction

    def __post_init__(self):
        p, q = Fraction(self.p), Fraction(self.q)
        if p <= 0 or q <= 0:
            raise ConfigError(f"p and q must be positive, got p={self.p} q={self.q}")
        for name, r in (("p", p), ("q", q)):
            if r.numerator > _MAX_RATIONAL_TERM or r.denominator > _MAX_RATIONAL_TERM:
                raise ConfigError(f"{name}={r} too extreme; numerator and denominator "
                                  f"must be <= {_MAX_RATIONAL_TERM}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)


AppParams = Union[MetaPath, Node2Vec]


@dataclass(frozen=True)
class WalkQuery:
    """One walk request.  target_length counts steps, so a completed walk's
    path holds target_length + 1 vertices."""

    id: int
    start_vertex: int
    target_length: int
    app: AppParams

    def __post_init__(self):
        if self.target_length < 1:
            raise ConfigError(f"target_length must be >= 1, got {self.target_length}")


@dataclass
class StepContext:
    """Walker state a step depends on: where it is, where it came from, and
    how many steps it has taken.  v_prev is None only before the first step."""

    v_curr: int
    v_prev: Optional[int] = None
    t: int = 0


class Termination(enum.Enum):
    COMPLETED = "completed"
    DEAD_END = "dead_end"


@dataclass
class WalkResult:
    query_id: int
    path: np.ndarray  # uint32 vertex ids, path[0] == start vertex
    terminated: Termination

    @property
    def steps(self) -> int:
        return len(self.path) - 1


def metapath_weight(w_star: int, edge_relation: int, expected: int) -> int:
    """Relation filter: the stored weight when the relation matches, else zero."""
    return int(w_star) if edge_relation == expected else 0


def node2vec_weight(w_star: int, b: int, ctx: StepContext, graph: CsrGraph,
                    p: Fraction, q: Fraction) -> int:
    """Second-order weight of candidate b given the previous vertex.

    w/p when b is the previous vertex, w when b is adjacent to it, w/q
    otherwise; division is fixed point, rounded half up.  The first step has
    no previous vertex and keeps w unchanged.
    """
    w = int(w_star)
    if ctx.v_prev is None:
        return w
    if b == ctx.v_prev:
        return scaled_div(w, p)
    if has_edge(graph, ctx.v_prev, b):
        return w
    return scaled_div(w, q)


def _step_weights(graph: CsrGraph, ctx: StepContext, app: AppParams,
                  off: int, degree: int) -> np.ndarray:
    """Vectorized weight vector for the current adjacency range; matches the
    scalar weight functions entry for entry."""
    w = graph.edge_weight[off:off + degree]
    if isinstance(app, MetaPath):
        match = graph.edge_relation[off:off + degree] == app.expected(ctx.t)
        return np.where(match, w, np.uint64(0))
    if ctx.v_prev is None:
        return w.copy()
    nbrs = graph.col_index[off:off + degree]
    pn, pd = np.uint64(app.p.numerator), np.uint64(app.p.denominator)
    qn, qd = np.uint64(app.q.numerator), np.uint64(app.q.denominator)
    two = np.uint64(2)
    w_div_p = (two * w * pd + pn) // (two * pn)
    w_div_q = (two * w * qd + qn) // (two * qn)
    plo = int(graph.row_index[ctx.v_prev])
    phi = int(graph.row_index[ctx.v_prev + 1])
    if phi > plo:
        prev_nbrs = graph.col_index[plo:phi]
        pos = np.searchsorted(prev_nbrs, nbrs)
        connected = (pos < len(prev_nbrs)) & (prev_nbrs[np.minimum(pos, len(prev_nbrs) - 1)] == nbrs)
    else:
        connected = np.zeros(degree, dtype=bool)
    return np.where(nbrs == np.uint32(ctx.v_prev), w_div_p,
                    np.where(connected, w, w_div_q))


def step(graph: CsrGraph, ctx: StepContext, query: WalkQuery,
         streams: Sequence[rng.RngStream], k: int = DEFAULT_BLOCK_WIDTH) -> Optional[int]:
    """Sample the next vertex, or None on a dead end.

    Streams the neighbor range through the weight function into block
    reservoir sampling, ceil(degree/k) blocks total, lane j drawing from
    streams[j] only.
    """
    off, degree = neighbors_info(graph, ctx.v_curr)
    if degree == 0:
        return None
    weights = _step_weights(graph, ctx, query.app, off, degree).tolist()
    items = graph.col_index[off:off + degree].tolist()
    res = Reservoir()
    for base in range(0, degree, k):
        fill = min(k, degree - base)
        block = WeightBlock(items[base:base + fill], weights[base:base + fill], fill)
        wrs_block_step(res, block, streams)
    return res.selected


def run_query(graph: CsrGraph, query: WalkQuery, master_seed: int,
              k: int = DEFAULT_BLOCK_WIDTH) -> WalkResult:
    """Walk one query to its target length or to a dead end.

    The path records every traversed vertex including the start; streams are
    forked from (master_seed, query.id) so the result is reproducible.
    """
    streams = rng.fork_streams(master_seed, query.id, k)
    ctx = StepContext(v_curr=query.start_vertex)
    path = [query.start_vertex]
    terminated = Termination.COMPLETED
    for _ in range(query.target_length):
        nxt = step(graph, ctx, query, streams, k)
        if nxt is None:
            terminated = Termination.DEAD_END
            break
        path.append(nxt)
        ctx = StepContext(v_curr=nxt, v_prev=ctx.v_curr, t=ctx.t + 1)
    return WalkResult(query.id, np.array(path, dtype=np.uint32), terminated)


def _run_group_compiled(graph: CsrGraph, queries: list[WalkQuery],
                        master_seed: int, k: int) -> list[WalkResult]:
    app = queries[0].app
    starts = np.array([q.start_vertex for q in queries], dtype=np.int64)
    ids = np.array([q.id for q in queries], dtype=np.uint64)
    lengths = np.array([q.target_length for q in queries], dtype=np.int64)
    max_len = int(lengths.max())
    paths = np.zeros((len(queries), max_len + 1), dtype=np.uint32)
    lens = np.zeros(len(queries), dtype=np.int64)
    master_mix = np.uint64(rng.mix64(master_seed + rng.GAMMA))
    if isinstance(app, MetaPath):
        _kernels.metapath_walks(graph.row_index, graph.col_index, graph.edge_weight,
                                graph.edge_relation, starts, ids, lengths,
                                np.array(app.relations, dtype=np.uint16),
                                k, master_mix, paths, lens)
    else:
        _kernels.node2vec_walks(graph.row_index, graph.col_index, graph.edge_weight,
                                starts, ids, lengths,
                                np.uint64(app.p.numerator), np.uint64(app.p.denominator),
                                np.uint64(app.q.numerator), np.uint64(app.q.denominator),
                                k, master_mix, paths, lens)
    results = []
    for i, q in enumerate(queries):
        n = int(lens[i])
        term = Termination.COMPLETED if n == q.target_length + 1 else Termination.DEAD_END
        results.append(WalkResult(q.id, paths[i, :n].copy(), term))
    return results


def run_batch(graph: CsrGraph, queries: Sequence[WalkQuery], workers: int = 1,
              master_seed: int = 42, k: int = DEFAULT_BLOCK_WIDTH,
              engine: str = "compiled") -> list[WalkResult]:
    """Execute queries independently; output is keyed by query id and is
    identical for any worker count given the same master seed."""
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    if engine not in ("compiled", "reference"):
        raise ConfigError(f"unknown engine {engine!r}")
    queries = list(queries)
    if not queries:
        return []

    def run_chunk(chunk: list[WalkQuery]) -> list[WalkResult]:
        if not chunk:
            return []
        if engine == "reference":
            return [run_query(graph, q, master_seed, k) for q in chunk]
        out: list[WalkResult] = []
        # kernel batches must share app params; group while preserving order
        group: list[WalkQuery] = []
        for q in chunk:
            if group and q.app != group[0].app:
                out.extend(_run_group_compiled(graph, group, master_seed, k))
                group = []
            group.append(q)
        out.extend(_run_group_compiled(graph, group, master_seed, k))
        return out

    if workers == 1:
        results = run_chunk(queries)
    else:
        chunks = [queries[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(run_chunk, chunks) for r in part]
    return sorted(results, key=lambda r: r.query_id)


def generate_queries(graph: CsrGraph, app: AppParams, target_length: int,
                     count: Optional[int] = None, master_seed: int = 42) -> list[WalkQuery]:
    """Default query set: one query per vertex with outgoing edges, each with
    a unique start vertex, in seeded shuffled order; ids follow that order."""
    starts = np.nonzero(graph.degrees > 0)[0]
    keys = rng.u32_array(master_seed, _SHUFFLE_STREAM, np.arange(len(starts), dtype=np.uint64))
    starts = starts[np.argsort(keys, kind="stable")]
    if count is not None:
        if count > len(starts):
            raise ConfigError(f"requested {count} queries but only {len(starts)} "
                              "vertices have outgoing edges")
        starts = starts[:count]
    return [WalkQuery(i, int(v), target_length, app) for i, v in enumerate(starts)]


@dataclass
class StationaryStats:
    """Analytic long-run visit distribution vs. tallied visits.

    For a static-weight walk the long-run probability of vertex v is its
    outgoing weight mass over the total weight mass; visit_counts tallies
    sampled vertices from the result paths (start vertices are chosen, not
    sampled, and are excluded).
    """

    visit_counts: np.ndarray
    total_weight: int
    expected_probability: np.ndarray
    empirical_frequency: np.ndarray
    tv_distance: float


def stationary_stats(graph: CsrGraph, results: Sequence[WalkResult]) -> StationaryStats:
    """Compare tallied visits against the analytic stationary distribution.

    Meaningful for static-weight walks on symmetric-weight (undirected)
    graphs, where the chain is reversible.
    """
    total_weight = int(graph.edge_weight.sum(dtype=object))
    if total_weight <= 0:
        raise ConfigError("graph has no positive edge weight")
    src = np.repeat(np.arange(graph.num_vertices), graph.degrees)
    out_mass = np.bincount(src, weights=graph.edge_weight.astype(np.float64),
                           minlength=graph.num_vertices)
    expected = out_mass / float(total_weight)

    visits = np.zeros(graph.num_vertices, dtype=np.int64)
    for r in results:
        if len(r.path) > 1:
            visits += np.bincount(r.path[1:], minlength=graph.num_vertices)
    total_visits = int(visits.sum())
    empirical = visits / total_visits if total_visits else np.zeros_like(expected)
    tv = 0.5 * float(np.abs(empirical - expected).sum())
    return StationaryStats(visits, total_weight, expected, empirical, tv)


def verify_result(graph: CsrGraph, query: WalkQuery, result: WalkResult):
    """Raise ValueError unless the result is a valid walk for its query:
    starts at the start vertex, uses only existing edges, satisfies the
    relation sequence when applicable, and terminated consistently."""
    path = result.path
    if len(path) < 1 or int(path[0]) != query.start_vertex:
        raise ValueError("path must begin at the query's start vertex")
    if len(path) > query.target_length + 1:
        raise ValueError("path exceeds target length")
    expected_term = (Termination.COMPLETED if len(path) == query.target_length + 1
                     else Termination.DEAD_END)
    if result.terminated != expected_term:
        raise ValueError(f"termination flag {result.terminated} inconsistent with "
                         f"path length {len(path)}")
    for t in range(len(path) - 1):
        u, v = int(path[t]), int(path[t + 1])
        if not has_edge(graph, u, v):
            raise ValueError(f"step {t}: ({u}, {v}) is not an edge")
        if isinstance(query.app, MetaPath):
            lo = int(graph.row_index[u])
            hi = int(graph.row_index[u + 1])
            e = lo + int(np.searchsorted(graph.col_index[lo:hi], v))
            if int(graph.edge_relation[e]) != query.app.expected(t):
                raise ValueError(f"step {t}: edge relation {graph.edge_relation[e]} "
                                 f"does not match expected {query.app.expected(t)}")
