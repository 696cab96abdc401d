"""Walk-result serialization: line-oriented text and a compact binary form.

Text: one ``query_id: v0 v1 v2 ...`` line per result, sorted by query id.
Binary: per result, little endian, u64 query id + u32 path length + u32
vertex ids.  Termination status is implied: a path of target_length + 1
vertices completed, anything shorter dead-ended.
"""

from __future__ import annotations

import struct
from typing import Optional, Sequence

import numpy as np

from .errors import FormatError
from .walkers import Termination, WalkResult


def write_results_text(results: Sequence[WalkResult], sink):
    lines = [f"{r.query_id}: {' '.join(str(int(v)) for v in r.path)}\n"
             for r in sorted(results, key=lambda r: r.query_id)]
    data = "".join(lines)
    if hasattr(sink, "write"):
        sink.write(data)
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(data)


def write_results_binary(results: Sequence[WalkResult], sink):
    chunks = []
    for r in sorted(results, key=lambda r: r.query_id):
        chunks.append(struct.pack("<QI", r.query_id, len(r.path)))
        chunks.append(np.asarray(r.path, dtype="<u4").tobytes())
    blob = b"".join(chunks)
    if hasattr(sink, "write"):
        sink.write(blob)
    else:
        with open(sink, "wb") as fh:
            fh.write(blob)


def _to_result(query_id: int, path: np.ndarray, target_length: Optional[int]) -> WalkResult:
    term = Termination.COMPLETED
    if target_length is not None and len(path) != target_length + 1:
        term = Termination.DEAD_END
    return WalkResult(query_id, path, term)


def read_results_text(source, target_length: Optional[int] = None) -> list[WalkResult]:
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    results = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            head, _, rest = line.partition(":")
            qid = int(head)
            path = np.array([int(tok) for tok in rest.split()], dtype=np.uint32)
        except ValueError:
            raise FormatError(f"line {line_no}: malformed result line {line!r}") from None
        if len(path) == 0:
            raise FormatError(f"line {line_no}: empty path")
        results.append(_to_result(qid, path, target_length))
    return results


def read_results_binary(source, target_length: Optional[int] = None) -> list[WalkResult]:
    if hasattr(source, "read"):
        blob = source.read()
    else:
        with open(source, "rb") as fh:
            blob = fh.read()
    results = []
    off = 0
    header = struct.Struct("<QI")
    while off < len(blob):
        if off + header.size > len(blob):
            raise FormatError("truncated result header")
        qid, n = header.unpack_from(blob, off)
        off += header.size
        if n == 0:
            raise FormatError("empty path")
        if off + 4 * n > len(blob):
            raise FormatError("truncated path payload")
        path = np.frombuffer(blob, dtype="<u4", count=n, offset=off).astype(np.uint32)
        off += 4 * n
        results.append(_to_result(qid, path, target_length))
    return results
