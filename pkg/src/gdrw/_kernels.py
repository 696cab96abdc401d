"""Compiled kernels for the Monte Carlo sampling engine and batch walking.

These mirror the pure-Python reference implementations in sampler.py and
walkers.py operation for operation: the same stream derivation, the same
per-lane random number consumption, and the same exact integer acceptance
test.  The test suite asserts bit-identical agreement between the two paths,
so any semantic change must be made in both places.

Constants must match rng.py.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

_GAMMA = uint64(0x9E3779B97F4A7C15)
_MIX_A = uint64(0xBF58476D1CE4E5B9)
_MIX_B = uint64(0x94D049BB133111EB)
_ID_SALT = uint64(0x5851F42D4C957F2D)


@njit(inline="always")
def _mix64(z):
    z = (z ^ (z >> uint64(30))) * _MIX_A
    z = (z ^ (z >> uint64(27))) * _MIX_B
    return z ^ (z >> uint64(31))


@njit(inline="always")
def _stream_base(master_mix, stream_id):
    return _mix64(_mix64(stream_id ^ _ID_SALT) ^ master_mix)


@njit(inline="always")
def _u32_at(base, counter):
    return _mix64(base + counter * _GAMMA) >> uint64(32)


@njit(inline="always")
def _accepts(w, s, r):
    """Exact 2^32 * w > r * s + w, with the 128-bit product split into
    32-bit limbs.  Requires s < 2^63 (holds under the documented bound on
    per-list weight sums)."""
    hi = r * (s >> uint64(32))
    lo = r * (s & uint64(0xFFFFFFFF))
    rhs_lo = lo + w
    if rhs_lo < lo:  # carry out of the low limb
        hi += uint64(1) << uint64(32)
    if w <= hi:
        return False
    d = w - hi
    if d >= uint64(1) << uint64(32):
        return True
    return (d << uint64(32)) > rhs_lo


@njit(cache=True, nogil=True)
def u32_probe(master_mix, stream_id, counters):
    """Kernel-side RNG draws, for agreement tests against rng.RngStream."""
    out = np.empty(len(counters), dtype=np.uint64)
    base = _stream_base(master_mix, stream_id)
    for i in range(len(counters)):
        out[i] = _u32_at(base, counters[i])
    return out


@njit(cache=True, nogil=True)
def accepts_probe(ws, totals, rs, out):
    """Kernel-side acceptance test over tuple arrays, for agreement tests
    against the wide-integer reference."""
    for i in range(len(ws)):
        out[i] = _accepts(ws[i], totals[i], rs[i])
    return out


@njit(cache=True, nogil=True)
def sample_indices(weights, k, master_mix, base_id_start, trials, out):
    """Run block reservoir sampling over one weight stream, many times.

    Trial t forks lane streams with ids (base_id_start + t) * k + j and
    consumes one draw per active lane per block, exactly like the reference
    block step.  out[t] is the selected stream position, or -1 when every
    weight is zero.
    """
    n = len(weights)
    bases = np.empty(k, dtype=np.uint64)
    for t in range(trials):
        qid = base_id_start + uint64(t)
        for j in range(k):
            bases[j] = _stream_base(master_mix, qid * uint64(k) + uint64(j))
        sel = -1
        ctr = uint64(0)
        wsum = uint64(0)
        pos = 0
        while pos < n:
            fill = min(k, n - pos)
            s = wsum
            for j in range(fill):
                w = weights[pos + j]
                s += w
                r = _u32_at(bases[j], ctr)
                if w > uint64(0) and _accepts(w, s, r):
                    sel = pos + j
            wsum = s
            ctr += uint64(1)
            pos += fill
        out[t] = sel
    return out


@njit(inline="always")
def _has_edge(row_index, col_index, u, v):
    lo = row_index[u]
    hi = row_index[u + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        c = col_index[mid]
        if c < v:
            lo = mid + 1
        elif c > v:
            hi = mid
        else:
            return True
    return False


@njit(cache=True, nogil=True)
def metapath_walks(row_index, col_index, edge_weight, edge_relation,
                   starts, query_ids, target_lengths, relation_seq,
                   k, master_mix, out_paths, out_lens):
    """Batch relation-constrained walks; one row of out_paths per query."""
    n_rel = len(relation_seq)
    for q in range(len(starts)):
        qid = query_ids[q]
        k64 = uint64(k)
        bases = np.empty(k, dtype=np.uint64)
        ctrs = np.zeros(k, dtype=np.uint64)
        for j in range(k):
            bases[j] = _stream_base(master_mix, qid * k64 + uint64(j))
        v = starts[q]
        out_paths[q, 0] = v
        length = 1
        for t in range(target_lengths[q]):
            off = row_index[v]
            degree = row_index[v + 1] - off
            if degree == 0:
                break
            expected = relation_seq[t % n_rel]
            sel = -1
            wsum = uint64(0)
            pos = 0
            while pos < degree:
                fill = min(k, degree - pos)
                s = wsum
                for j in range(fill):
                    e = off + pos + j
                    w = edge_weight[e] if edge_relation[e] == expected else uint64(0)
                    s += w
                    r = _u32_at(bases[j], ctrs[j])
                    ctrs[j] += uint64(1)
                    if w > uint64(0) and _accepts(w, s, r):
                        sel = pos + j
                wsum = s
                pos += fill
            if sel < 0:
                break
            v = np.int64(col_index[off + sel])
            out_paths[q, length] = v
            length += 1
        out_lens[q] = length


@njit(cache=True, nogil=True)
def node2vec_walks(row_index, col_index, edge_weight,
                   starts, query_ids, target_lengths,
                   p_num, p_den, q_num, q_den,
                   k, master_mix, out_paths, out_lens):
    """Batch second-order walks with return parameter p and in-out parameter q.

    The first step has no previous vertex and uses the stored weights
    unchanged.  Division by p or q is fixed point, rounded half up.
    """
    for q in range(len(starts)):
        qid = query_ids[q]
        k64 = uint64(k)
        bases = np.empty(k, dtype=np.uint64)
        ctrs = np.zeros(k, dtype=np.uint64)
        for j in range(k):
            bases[j] = _stream_base(master_mix, qid * k64 + uint64(j))
        v = starts[q]
        prev = np.int64(-1)
        out_paths[q, 0] = v
        length = 1
        for t in range(target_lengths[q]):
            off = row_index[v]
            degree = row_index[v + 1] - off
            if degree == 0:
                break
            sel = -1
            wsum = uint64(0)
            pos = 0
            while pos < degree:
                fill = min(k, degree - pos)
                s = wsum
                for j in range(fill):
                    e = off + pos + j
                    w = edge_weight[e]
                    if prev >= 0:
                        b = np.int64(col_index[e])
                        if b == prev:
                            w = (uint64(2) * w * p_den + p_num) // (uint64(2) * p_num)
                        elif not _has_edge(row_index, col_index, prev, col_index[e]):
                            w = (uint64(2) * w * q_den + q_num) // (uint64(2) * q_num)
                    s += w
                    r = _u32_at(bases[j], ctrs[j])
                    ctrs[j] += uint64(1)
                    if w > uint64(0) and _accepts(w, s, r):
                        sel = pos + j
                wsum = s
                pos += fill
            if sel < 0:
                break
            prev = v
            v = np.int64(col_index[off + sel])
            out_paths[q, length] = v
            length += 1
        out_lens[q] = length
