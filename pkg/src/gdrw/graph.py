"""CSR graph container, edge-list ingestion, binary persistence, R-MAT synthesis.

The graph is stored in compressed sparse row form: row_index holds the
offset of each vertex's adjacency range in col_index (so degree(v) =
row_index[v+1] - row_index[v]), col_index holds destination ids sorted
ascending within each range, and three parallel per-edge/per-vertex arrays
carry fixed-point weights, vertex labels, and edge relation ids.  Graphs are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .errors import ConfigError, FormatError, ParseError
from .fixedpoint import MAX_LIST_SUM, ONE, encode

_MAGIC = b"GDRW"
_FORMAT_VERSION = 1
_FLAG_WEIGHTS = 1
_FLAG_LABELS = 2
_FLAG_RELATIONS = 4

# Fixed stream ids for the seeded attribute generators, so that graph
# randomization never collides with walk-query streams (which use small ids).
_WEIGHT_STREAM = 1 << 56
_LABEL_STREAM = (1 << 56) + 1
_RMAT_STREAM_BASE = 1 << 57


@dataclass
class CsrGraph:
    """Immutable CSR graph with weights, labels and relation ids.

    Attributes
    ----------
    num_vertices, num_edges : int
    row_index : int64[num_vertices + 1]
        Nondecreasing edge offsets; row_index[0] == 0, row_index[-1] == num_edges.
    col_index : uint32[num_edges]
        Destination ids, strictly ascending within each vertex's range.
    edge_weight : uint64[num_edges]
        Raw fixed-point weights (value = raw / 2^16), all nonnegative.
    vertex_label : uint16[num_vertices]
    edge_relation : uint16[num_edges]
    """

    num_vertices: int
    num_edges: int
    row_index: np.ndarray
    col_index: np.ndarray
    edge_weight: np.ndarray
    vertex_label: np.ndarray
    edge_relation: np.ndarray

    def __post_init__(self):
        self.row_index = np.ascontiguousarray(self.row_index, dtype=np.int64)
        self.col_index = np.ascontiguousarray(self.col_index, dtype=np.uint32)
        self.edge_weight = np.ascontiguousarray(self.edge_weight, dtype=np.uint64)
        self.vertex_label = np.ascontiguousarray(self.vertex_label, dtype=np.uint16)
        self.edge_relation = np.ascontiguousarray(self.edge_relation, dtype=np.uint16)
        self.validate()
        for arr in (self.row_index, self.col_index, self.edge_weight,
                    self.vertex_label, self.edge_relation):
            arr.setflags(write=False)

    def validate(self):
        """Check every structural invariant; raises ValueError on violation."""
        v, e = self.num_vertices, self.num_edges
        if self.row_index.shape != (v + 1,):
            raise ValueError("row_index must have num_vertices + 1 entries")
        if self.col_index.shape != (e,) or self.edge_weight.shape != (e,) \
                or self.edge_relation.shape != (e,):
            raise ValueError("per-edge arrays must have num_edges entries")
        if self.vertex_label.shape != (v,):
            raise ValueError("vertex_label must have num_vertices entries")
        if e and not v:
            raise ValueError("edges without vertices")
        if self.row_index[0] != 0 or self.row_index[-1] != e:
            raise ValueError("row_index must start at 0 and end at num_edges")
        if np.any(np.diff(self.row_index) < 0):
            raise ValueError("row_index must be nondecreasing")
        if e and int(self.col_index.max()) >= v:
            raise ValueError("col_index entry out of range")
        if e > 1:
            # strictly ascending destinations inside each adjacency range
            decreasing = np.diff(self.col_index.astype(np.int64)) <= 0
            starts = self.row_index[1:-1]
            starts = starts[(starts > 0) & (starts < e)]
            decreasing[starts - 1] = False
            if decreasing.any():
                raise ValueError("neighbor lists must be strictly ascending")
        if e:
            self._check_list_sums()

    def _check_list_sums(self):
        # per-list weight sums must stay within the sampler's 128-bit-safe
        # bound; uint64 prefix differences are exact for rows shorter than
        # 2^16 edges, longer rows fall back to unbounded integers
        if int(self.edge_weight.max()) > MAX_LIST_SUM:
            raise ValueError(f"edge weight exceeds 2^{MAX_LIST_SUM.bit_length() - 1}")
        prefix = np.zeros(self.num_edges + 1, dtype=np.uint64)
        np.cumsum(self.edge_weight, out=prefix[1:])
        row_sums = prefix[self.row_index[1:]] - prefix[self.row_index[:-1]]
        degrees = np.diff(self.row_index)
        big = degrees >= 1 << 16
        if big.any():
            for v in np.nonzero(big)[0]:
                lo, hi = int(self.row_index[v]), int(self.row_index[v + 1])
                if int(self.edge_weight[lo:hi].sum(dtype=object)) > MAX_LIST_SUM:
                    raise ValueError(f"weight sum of vertex {v}'s neighbor list "
                                     f"exceeds 2^{MAX_LIST_SUM.bit_length() - 1}")
            row_sums = row_sums[~big]
        if row_sums.size and int(row_sums.max()) > MAX_LIST_SUM:
            raise ValueError(f"weight sum of a neighbor list exceeds "
                             f"2^{MAX_LIST_SUM.bit_length() - 1}")

    # CsrGraph is a value: equality is structural.
    def __eq__(self, other):
        if not isinstance(other, CsrGraph):
            return NotImplemented
        return (self.num_vertices == other.num_vertices
                and self.num_edges == other.num_edges
                and np.array_equal(self.row_index, other.row_index)
                and np.array_equal(self.col_index, other.col_index)
                and np.array_equal(self.edge_weight, other.edge_weight)
                and np.array_equal(self.vertex_label, other.vertex_label)
                and np.array_equal(self.edge_relation, other.edge_relation))

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.row_index)


def neighbors_info(graph: CsrGraph, v: int) -> tuple[int, int]:
    """(offset, degree) of vertex v: where its adjacency range starts and how long it is."""
    if not 0 <= v < graph.num_vertices:
        raise IndexError(f"vertex {v} out of range [0, {graph.num_vertices})")
    off = int(graph.row_index[v])
    return off, int(graph.row_index[v + 1]) - off


def has_edge(graph: CsrGraph, u: int, v: int) -> bool:
    """True iff edge (u, v) exists; binary search over u's sorted neighbors."""
    if not 0 <= u < graph.num_vertices or not 0 <= v < graph.num_vertices:
        raise IndexError("vertex id out of range")
    lo = int(graph.row_index[u])
    hi = int(graph.row_index[u + 1])
    i = lo + int(np.searchsorted(graph.col_index[lo:hi], v))
    return i < hi and int(graph.col_index[i]) == v


def from_edges(src, dst, weight_raw=None, relation=None, labels=None,
               num_vertices=None, directed=True) -> CsrGraph:
    """Build a CSR graph from parallel edge arrays.

    Undirected inputs are expanded into two directed edges per pair.
    Duplicate (src, dst) pairs keep the last occurrence.  When no relation
    ids are given they default to the destination vertex's label.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.shape != dst.shape:
        raise ValueError("src and dst must have the same length")
    m = len(src)
    weight_raw = (np.full(m, ONE, dtype=np.uint64) if weight_raw is None
                  else np.asarray(weight_raw, dtype=np.uint64))
    relation_given = relation is not None
    relation = (np.zeros(m, dtype=np.uint16) if relation is None
                else np.asarray(relation, dtype=np.uint16))

    if m:
        if src.min() < 0 or dst.min() < 0:
            raise ValueError("vertex ids must be nonnegative")
        max_id = int(max(src.max(), dst.max()))
        if max_id >= 1 << 32:
            raise ValueError(f"vertex id {max_id} exceeds the 32-bit id space")
    else:
        max_id = -1
    v = max_id + 1 if num_vertices is None else int(num_vertices)
    if max_id >= v:
        raise ValueError(f"vertex id {max_id} >= num_vertices {v}")

    arrival = np.arange(m)
    if not directed:
        # both directed copies of a line share its arrival rank, so keep-last
        # dedup resolves (u,v) and (v,u) to the same line's weight
        src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
        weight_raw = np.concatenate([weight_raw, weight_raw])
        relation = np.concatenate([relation, relation])
        arrival = np.concatenate([arrival, arrival])
        m = len(src)

    if m:
        order = np.lexsort((arrival, dst, src))
        src, dst = src[order], dst[order]
        weight_raw, relation = weight_raw[order], relation[order]
        # keep the last arrival of every (src, dst) pair
        keep = np.ones(m, dtype=bool)
        keep[:-1] = (src[:-1] != src[1:]) | (dst[:-1] != dst[1:])
        src, dst = src[keep], dst[keep]
        weight_raw, relation = weight_raw[keep], relation[keep]

    row_index = np.zeros(v + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=v), out=row_index[1:])

    if labels is None:
        labels = np.zeros(v, dtype=np.uint16)
    else:
        labels = np.asarray(labels, dtype=np.uint16)
    if not relation_given:
        relation = labels[dst] if len(dst) else np.zeros(0, dtype=np.uint16)

    return CsrGraph(v, len(src), row_index, dst.astype(np.uint32),
                    weight_raw, labels, relation.astype(np.uint16))


def load_edge_list(source, directed=True, num_vertices=None) -> CsrGraph:
    """Parse a text edge list into a CSR graph.

    Lines are ``src dst [weight] [relation]``, whitespace separated;
    ``#``-prefixed lines are comments.  A missing weight defaults to 1.0 and
    a missing relation to 0.  Raises ParseError with the line number on
    malformed input.
    """
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()

    srcs, dsts, weights, relations = [], [], [], []
    any_relation = False
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) < 2 or len(parts) > 4:
            raise ParseError(line_no, f"expected 'src dst [weight] [relation]', got {text!r}")
        try:
            s, d = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(line_no, f"vertex ids must be integers, got {text!r}") from None
        if s < 0 or d < 0:
            raise ParseError(line_no, "vertex ids must be nonnegative")
        if max(s, d) >= 1 << 32:
            raise ParseError(line_no, f"vertex id {max(s, d)} exceeds the 32-bit id space")
        w = ONE
        if len(parts) >= 3:
            try:
                w = encode(Fraction(parts[2]))
            except (ValueError, ZeroDivisionError):
                raise ParseError(line_no, f"bad weight {parts[2]!r}") from None
        r = 0
        if len(parts) == 4:
            try:
                r = int(parts[3])
            except ValueError:
                raise ParseError(line_no, f"bad relation id {parts[3]!r}") from None
            if not 0 <= r < 1 << 16:
                raise ParseError(line_no, f"relation id {r} out of range [0, 65536)")
            any_relation = True
        srcs.append(s)
        dsts.append(d)
        weights.append(w)
        relations.append(r)

    return from_edges(np.array(srcs, dtype=np.int64), np.array(dsts, dtype=np.int64),
                      np.array(weights, dtype=np.uint64),
                      np.array(relations, dtype=np.uint16) if any_relation else None,
                      num_vertices=num_vertices, directed=directed)


def rmat_generate(scale: int, edge_factor: int, probs=(0.57, 0.19, 0.19, 0.05),
                  seed: int = 42) -> np.ndarray:
    """Synthesize a power-law edge list by recursive-matrix quadrant descent.

    Returns an (edge_factor * 2^scale, 2) array of (src, dst) pairs over
    2^scale vertices.  Deterministic for a fixed seed.
    """
    if not 0 <= scale <= 24:
        raise ConfigError(f"scale must be in [0, 24], got {scale}")
    if edge_factor < 1:
        raise ConfigError(f"edge_factor must be >= 1, got {edge_factor}")
    a, b, c, d = (float(p) for p in probs)
    if min(a, b, c, d) < 0 or abs(a + b + c + d - 1.0) > 1e-9:
        raise ConfigError(f"quadrant probabilities must be nonnegative and sum to 1, got {probs}")

    m = edge_factor << scale
    # cumulative thresholds on the u32 lattice; drawing u < t picks the quadrant
    t1 = np.uint64(round(a * 2**32))
    t2 = np.uint64(round((a + b) * 2**32))
    t3 = np.uint64(round((a + b + c) * 2**32))

    src = np.zeros(m, dtype=np.uint64)
    dst = np.zeros(m, dtype=np.uint64)
    counters = np.arange(m, dtype=np.uint64)
    for level in range(scale):
        u = rng.u32_array(seed, _RMAT_STREAM_BASE + level, counters).astype(np.uint64)
        quadrant = (u >= t1).astype(np.uint64) + (u >= t2) + (u >= t3)
        src |= (quadrant >> np.uint64(1)) << np.uint64(level)
        dst |= (quadrant & np.uint64(1)) << np.uint64(level)
    return np.stack([src, dst], axis=1).astype(np.int64)


def with_random_weights(graph: CsrGraph, seed: int, low: int = 1, high: int = 64) -> CsrGraph:
    """Copy of the graph with integer edge weights drawn uniformly from [low, high]."""
    if not 1 <= low <= high:
        raise ConfigError(f"need 1 <= low <= high, got [{low}, {high}]")
    span = np.uint64(high - low + 1)
    u = rng.u32_array(seed, _WEIGHT_STREAM, np.arange(graph.num_edges, dtype=np.uint64))
    values = np.uint64(low) + ((u * span) >> np.uint64(32))
    return CsrGraph(graph.num_vertices, graph.num_edges, graph.row_index,
                    graph.col_index, values << np.uint64(16),
                    graph.vertex_label, graph.edge_relation)


def with_random_labels(graph: CsrGraph, seed: int, num_labels: int = 4,
                       relabel_edges: bool = True) -> CsrGraph:
    """Copy of the graph with uniform random vertex labels.

    When relabel_edges is set, edge relation ids are rederived as the label
    of the destination vertex (the default when no relation input exists).
    """
    if not 1 <= num_labels < 1 << 16:
        raise ConfigError(f"num_labels must be in [1, 65536), got {num_labels}")
    u = rng.u32_array(seed, _LABEL_STREAM, np.arange(graph.num_vertices, dtype=np.uint64))
    labels = ((u * np.uint64(num_labels)) >> np.uint64(32)).astype(np.uint16)
    relations = labels[graph.col_index] if relabel_edges else graph.edge_relation
    return CsrGraph(graph.num_vertices, graph.num_edges, graph.row_index,
                    graph.col_index, graph.edge_weight, labels, relations)


# -- binary persistence ------------------------------------------------------
#
# Layout: magic "GDRW" | version u32 | num_vertices u64 | num_edges u64 |
# flags u32 (bit0 weights, bit1 labels, bit2 relations) | row_index u64[V+1] |
# col_index u32[E] | optional sections in flag order | crc32 u32 of all bytes
# between the magic and the checksum.  Everything little endian.

def write_binary(graph: CsrGraph, sink):
    """Serialize the graph; sink is a path or a binary file object."""
    flags = _FLAG_WEIGHTS | _FLAG_LABELS | _FLAG_RELATIONS
    payload = bytearray()
    payload += struct.pack("<IQQI", _FORMAT_VERSION, graph.num_vertices,
                           graph.num_edges, flags)
    payload += graph.row_index.astype("<u8").tobytes()
    payload += graph.col_index.astype("<u4").tobytes()
    payload += graph.edge_weight.astype("<u8").tobytes()
    payload += graph.vertex_label.astype("<u2").tobytes()
    payload += graph.edge_relation.astype("<u2").tobytes()
    blob = _MAGIC + bytes(payload) + struct.pack("<I", zlib.crc32(payload))
    if hasattr(sink, "write"):
        sink.write(blob)
    else:
        with open(sink, "wb") as fh:
            fh.write(blob)


def read_binary(source) -> CsrGraph:
    """Deserialize a graph written by write_binary; validates magic and checksum."""
    if hasattr(source, "read"):
        blob = source.read()
    else:
        with open(source, "rb") as fh:
            blob = fh.read()
    if len(blob) < len(_MAGIC) + 4 or blob[:4] != _MAGIC:
        raise FormatError("not a GDRW graph file (bad magic)")
    payload, (crc,) = blob[4:-4], struct.unpack("<I", blob[-4:])
    if zlib.crc32(payload) != crc:
        raise FormatError("checksum mismatch")
    try:
        version, v, e, flags = struct.unpack_from("<IQQI", payload, 0)
    except struct.error:
        raise FormatError("truncated header") from None
    if version != _FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}")

    off = struct.calcsize("<IQQI")

    def take(dtype, count):
        nonlocal off
        nbytes = np.dtype(dtype).itemsize * count
        if off + nbytes > len(payload):
            raise FormatError("truncated payload")
        arr = np.frombuffer(payload, dtype=dtype, count=count, offset=off)
        off += nbytes
        return arr

    row_index = take("<u8", v + 1).astype(np.int64)
    col_index = take("<u4", e)
    weights = take("<u8", e) if flags & _FLAG_WEIGHTS else np.full(e, ONE, dtype=np.uint64)
    labels = take("<u2", v) if flags & _FLAG_LABELS else np.zeros(v, dtype=np.uint16)
    relations = take("<u2", e) if flags & _FLAG_RELATIONS else labels[col_index]
    if off != len(payload):
        raise FormatError("trailing bytes after payload")
    try:
        return CsrGraph(v, e, row_index, col_index, weights, labels, relations)
    except ValueError as exc:
        raise FormatError(f"invalid graph structure: {exc}") from None
