"""Command-line entry point: convert, rmat, walk, validate, simulate.

Every command is deterministic given its flags (the master seed included).
Exit codes: 0 success, 1 input or validation failure, 2 internal error.
Set GDRW_LOG to a logging level name to change verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction

from . import graph as graphmod
from . import memsim, results_io, validation, walkers
from .errors import GdrwError

log = logging.getLogger("gdrw")

DEFAULT_SEED = 42
_LENGTH_DEFAULTS = {"metapath": 5, "node2vec": 80}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; these are input failures (1)
    def error(self, message):
        raise _UsageError(message)


def _load_graph(path: str, undirected: bool) -> graphmod.CsrGraph:
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == b"GDRW":
        return graphmod.read_binary(path)
    return graphmod.load_edge_list(path, directed=not undirected)


def _apply_randomization(g, args):
    if args.random_weights:
        lo, hi = args.random_weights
        g = graphmod.with_random_weights(g, args.seed, lo, hi)
    if args.random_labels:
        g = graphmod.with_random_labels(g, args.seed, args.random_labels)
    return g


def _add_graph_args(p):
    p.add_argument("--graph", required=True, help="binary CSR file or text edge list")
    p.add_argument("--undirected", action="store_true",
                   help="treat a text edge list as undirected")
    p.add_argument("--random-weights", nargs=2, type=int, metavar=("LO", "HI"),
                   default=None, help="assign seeded uniform integer edge weights")
    p.add_argument("--random-labels", type=int, metavar="N", default=None,
                   help="assign seeded uniform vertex labels over N classes "
                        "(rederives edge relations)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="gdrw", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="edge list -> binary CSR file")
    p.add_argument("input", help="text edge list")
    p.add_argument("--out", required=True)
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--num-vertices", type=int, default=None)

    p = sub.add_parser("rmat", help="synthesize a power-law graph")
    p.add_argument("--scale", type=int, required=True, help="2^scale vertices")
    p.add_argument("--edge-factor", type=int, default=8)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["text", "binary"], default="text",
                   help="edge-list text or binary CSR")

    p = sub.add_parser("walk", help="run a batch of random walk queries")
    _add_graph_args(p)
    p.add_argument("--app", choices=["metapath", "node2vec"], required=True)
    p.add_argument("--length", type=int, default=None,
                   help="steps per query (default: 5 metapath, 80 node2vec)")
    p.add_argument("--queries", type=int, default=None,
                   help="number of queries (default: every vertex with outgoing edges)")
    p.add_argument("--k", type=int, default=walkers.DEFAULT_BLOCK_WIDTH,
                   help="sampler block width")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--p", type=str, default="2", help="node2vec return parameter")
    p.add_argument("--q", type=str, default="0.5", help="node2vec in-out parameter")
    p.add_argument("--relations", type=str, default="0",
                   help="comma-separated metapath relation sequence")
    p.add_argument("--format", choices=["text", "binary"], default="text")
    p.add_argument("--out", required=True, help="results file")

    p = sub.add_parser("validate", help="run the sampling self-checks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--vectors", type=int, default=50)
    p.add_argument("--trials", type=int, default=50_000)
    p.add_argument("--k", type=int, nargs="+", default=list(validation.DEFAULT_KS))

    p = sub.add_parser("simulate", help="replay walk results through the memory simulator")
    _add_graph_args(p)
    p.add_argument("--results", required=True, help="results file from 'walk'")
    p.add_argument("--format", choices=["text", "binary"], default="text",
                   help="format of the results file")
    p.add_argument("--cache-lines", type=int, default=memsim.DEFAULT_CACHE_LINES)
    p.add_argument("--s1", type=int, default=memsim.DEFAULT_LONG_BURST,
                   help="long burst length in records")
    p.add_argument("--s2", type=int, default=memsim.DEFAULT_SHORT_BURST,
                   help="short burst length in records")
    p.add_argument("--record-bytes", type=int, default=memsim.DEFAULT_RECORD_BYTES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    return parser


def _cmd_convert(args) -> int:
    g = graphmod.load_edge_list(args.input, directed=not args.undirected,
                                num_vertices=args.num_vertices)
    graphmod.write_binary(g, args.out)
    degrees = g.degrees
    print(f"vertices: {g.num_vertices}")
    print(f"edges: {g.num_edges}")
    print(f"max degree: {int(degrees.max()) if g.num_vertices else 0}")
    return 0


def _cmd_rmat(args) -> int:
    edges = graphmod.rmat_generate(args.scale, args.edge_factor, seed=args.seed)
    if args.format == "text":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.writelines(f"{s} {d}\n" for s, d in edges.tolist())
    else:
        g = graphmod.from_edges(edges[:, 0], edges[:, 1],
                                num_vertices=1 << args.scale)
        graphmod.write_binary(g, args.out)
    print(f"vertices: {1 << args.scale}")
    print(f"generated edges: {len(edges)}")
    return 0


def _make_app(args) -> walkers.AppParams:
    if args.app == "metapath":
        try:
            rels = tuple(int(tok) for tok in args.relations.split(","))
        except ValueError:
            raise _UsageError(f"bad relation sequence {args.relations!r}") from None
        return walkers.MetaPath(rels)
    try:
        return walkers.Node2Vec(Fraction(args.p), Fraction(args.q))
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"bad p/q values p={args.p!r} q={args.q!r}") from None


def _cmd_walk(args) -> int:
    g = _apply_randomization(_load_graph(args.graph, args.undirected), args)
    app = _make_app(args)
    length = args.length if args.length is not None else _LENGTH_DEFAULTS[args.app]
    queries = walkers.generate_queries(g, app, length, count=args.queries,
                                       master_seed=args.seed)
    t0 = time.perf_counter()
    results = walkers.run_batch(g, queries, workers=args.workers,
                                master_seed=args.seed, k=args.k)
    wall = time.perf_counter() - t0
    if args.format == "text":
        results_io.write_results_text(results, args.out)
    else:
        results_io.write_results_binary(results, args.out)
    total_steps = sum(r.steps for r in results)
    summary = {
        "queries": len(results),
        "total_steps": total_steps,
        "dead_ends": sum(r.terminated is walkers.Termination.DEAD_END for r in results),
        "wall_time_s": round(wall, 6),
        "steps_per_sec": round(total_steps / wall, 1) if wall > 0 else None,
        "graph": {"vertices": g.num_vertices, "edges": g.num_edges},
        "app": args.app,
        "length": length,
        "k": args.k,
        "workers": args.workers,
        "seed": args.seed,
        "out": args.out,
    }
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_validate(args) -> int:
    report = validation.run_validation(seed=args.seed, n_vectors=args.vectors,
                                       ks=tuple(args.k), trials=args.trials)
    for check in report.checks:
        print(check.line())
    return 0 if report.passed else 1


def _cmd_simulate(args) -> int:
    g = _apply_randomization(_load_graph(args.graph, args.undirected), args)
    if args.format == "text":
        results = results_io.read_results_text(args.results)
    else:
        results = results_io.read_results_binary(args.results)
    report = memsim.simulate_trace(
        g, results,
        cache_lines=args.cache_lines,
        s1=args.s1 * args.record_bytes,
        s2=args.s2 * args.record_bytes,
        record_bytes=args.record_bytes,
    )
    text = report.to_json(indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


_COMMANDS = {
    "convert": _cmd_convert,
    "rmat": _cmd_rmat,
    "walk": _cmd_walk,
    "validate": _cmd_validate,
    "simulate": _cmd_simulate,
}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("GDRW_LOG", "WARNING").upper())
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GdrwError, OSError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # internal error
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
