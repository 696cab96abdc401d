"""Shared fixtures and the acceptance-criteria summary printer."""

import numpy as np
import pytest

import gdrw

_ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def record_criterion(number: int, name: str, passed: bool, detail: str = ""):
    _ACCEPTANCE.append((number, name, bool(passed), detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(_ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        suffix = f" -- {detail}" if detail else ""
        terminalreporter.write_line(f"[{status}] criterion {number}: {name}{suffix}")


@pytest.fixture
def triangle():
    """Directed 3-cycle both ways: every pair connected, all weights 1."""
    src = [0, 0, 1, 1, 2, 2]
    dst = [1, 2, 0, 2, 0, 1]
    return gdrw.from_edges(src, dst)


def random_graph(seed: int, num_vertices: int, num_edges: int,
                 directed: bool = True, max_weight: int = 8) -> gdrw.CsrGraph:
    """Small deterministic random graph for unit tests."""
    r = np.random.default_rng(seed)
    src = r.integers(0, num_vertices, num_edges)
    dst = r.integers(0, num_vertices, num_edges)
    w = r.integers(1, max_weight + 1, num_edges).astype(np.uint64) << np.uint64(16)
    return gdrw.from_edges(src, dst, w, num_vertices=num_vertices, directed=directed)
