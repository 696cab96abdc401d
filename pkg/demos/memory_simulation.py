#!/usr/bin/env python3
"""Replaying walk traces through the memory simulator.

Walks make two kinds of memory requests: random lookups into the per-vertex
offset table and variable-length sequential loads of neighbor lists.  This
demo measures how a degree-aware replacement policy compares against a plain
direct-mapped cache on the random lookups, and how dynamic burst scheduling
bounds wasted bytes on the sequential loads.
"""

import gdrw
from gdrw import memsim, walkers

print("=" * 72)
print("1. Workload: relation-constrained walks on a power-law graph")
print("=" * 72)
SCALE = 14
edges = gdrw.rmat_generate(SCALE, 8, probs=(0.6, 0.19, 0.19, 0.02), seed=42)
g = gdrw.from_edges(edges[:, 0], edges[:, 1], num_vertices=1 << SCALE)
g = gdrw.with_random_weights(g, 42, 1, 64)
g = gdrw.with_random_labels(g, 42, num_labels=4)
deg = g.degrees
print(f"\n2^{SCALE} vertices, {g.num_edges} edges, max degree {deg.max()} "
      f"(mean {deg.mean():.1f}): heavy-tailed")

base = walkers.generate_queries(g, walkers.MetaPath((0, 1, 2, 3)), 5, master_seed=42)
results = []
for round_no in range(4):  # several rounds so cold misses amortize
    qs = [walkers.WalkQuery(round_no * len(base) + q.id, q.start_vertex,
                            q.target_length, q.app) for q in base]
    results.extend(walkers.run_batch(g, qs, master_seed=42))
trace = memsim.derive_trace(g, results)
print(f"{len(results)} walks -> {len(trace.vertices)} vertex expansions")

print("\n" + "=" * 72)
print("2. Degree-aware vs direct-mapped cache")
print("=" * 72)
print("""
Both caches are direct mapped over the offset table. The baseline always
replaces on a miss; the degree-aware policy only lets a strictly
higher-degree vertex evict the resident line, so hubs accumulate in cache.
High-degree vertices are exactly the ones walks keep returning to.
""")
print(f"{'lines':>8} {'degree-aware':>14} {'direct-mapped':>14} {'gap':>8}")
for capacity in (256, 1024, 4096):
    report = memsim.simulate_trace(g, results, cache_lines=capacity)
    gap = report.dmc_miss_ratio - report.dac_miss_ratio
    print(f"{capacity:>8} {report.dac_miss_ratio:>13.1%} "
          f"{report.dmc_miss_ratio:>13.1%} {gap:>7.1%}")
print("(miss ratios; smaller is better. With 2^14 vertices and 4096 lines the"
      "\n working set no longer fits and the policy difference shows.)")

print("\n" + "=" * 72)
print("3. Dynamic burst scheduling")
print("=" * 72)
print("""
A c-byte neighbor load is split into floor(c/S1) long bursts plus however
many short bursts cover the rest, so at most S2 - 1 fetched bytes are wasted
per request. Long bursts carry the bulk cheaply; short bursts keep the tail
tight.
""")
for c in (33, 2, 256, 0):
    plan = memsim.burst_plan(c, 16, 1)
    print(f"  c={c:>3} bytes, S1=16, S2=1 -> {plan.n_long} long + {plan.n_short} short, "
          f"{plan.bytes_loaded} loaded / {plan.bytes_valid} used")

print("\nStrategy sweep on the walk trace (burst lengths in 8-byte records):")
print(f"{'strategy':>12} {'valid-data ratio':>18} {'long':>10} {'short':>10}")
for s1_len, s2_len in ((1, 1), (2, 1), (8, 1), (32, 1), (64, 8)):
    report = memsim.simulate_trace(g, results, cache_lines=4096,
                                   s1=s1_len * 8, s2=s2_len * 8)
    name = f"b{s2_len}+b{s1_len}"
    print(f"{name:>12} {report.valid_data_ratio:>17.1%} "
          f"{report.n_long:>10} {report.n_short:>10}")
print("""
With an 8-byte short burst the ratio stays at 100%: every request is a whole
number of records. Widening the short burst (last row) trades valid-data
ratio for fewer, larger requests.
""")
