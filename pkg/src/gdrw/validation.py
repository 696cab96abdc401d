"""Self-checking suites: empirical sampling distributions against analytic
oracles.

These back the ``validate`` CLI command and are reused (with larger trial
counts) by the acceptance tests.  Every suite is deterministic for a given
seed, so a pass/fail outcome is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng, stats
from .sampler import (exact_distribution, inverse_transform_many,
                      sample_index_many, wrs_sequential)

_VECTOR_STREAM = (1 << 56) + 3

DEFAULT_KS = (1, 4, 16)
DEFAULT_ALPHA = 1e-3


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


@dataclass
class SuiteReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str):
        self.checks.append(CheckResult(name, bool(passed), detail))


def random_weight_vectors(seed: int, count: int, max_len: int = 256,
                          max_weight: int = 1000) -> list[np.ndarray]:
    """Deterministic batch of integer weight vectors (lengths 1..max_len,
    weights 1..max_weight)."""
    lens = rng.u32_array(seed, _VECTOR_STREAM, np.arange(count, dtype=np.uint64))
    lens = 1 + ((lens.astype(np.uint64) * np.uint64(max_len)) >> np.uint64(32))
    vectors = []
    for i, n in enumerate(lens.tolist()):
        u = rng.u32_array(seed, _VECTOR_STREAM + 1 + i, np.arange(n, dtype=np.uint64))
        w = 1 + ((u.astype(np.uint64) * np.uint64(max_weight)) >> np.uint64(32))
        vectors.append(w.astype(np.uint64))
    return vectors


def selection_counts(weights: np.ndarray, k: int, seed: int, trials: int) -> np.ndarray:
    """Empirical selection histogram of the block sampler over one vector."""
    sel = sample_index_many(weights, k, seed, trials)
    assert (sel >= 0).all(), "positive-weight vector produced an empty selection"
    return np.bincount(sel, minlength=len(weights))


def gof_suite(seed: int, n_vectors: int = 50, ks=DEFAULT_KS, trials: int = 200_000,
              alpha: float = DEFAULT_ALPHA, max_len: int = 256,
              max_weight: int = 1000, min_pass: int | None = None):
    """Block-sampler goodness of fit against the analytic distribution.

    Runs every k over the same weight vectors; returns (SuiteReport, counts)
    where counts[k][i] is the histogram for vector i, so callers can reuse it
    for cross-k comparisons.
    """
    if min_pass is None:
        min_pass = n_vectors - max(1, n_vectors // 25)
    vectors = random_weight_vectors(seed, n_vectors, max_len, max_weight)
    report = SuiteReport()
    counts: dict[int, list[np.ndarray]] = {}
    for k in ks:
        counts[k] = []
        passed = 0
        for i, w in enumerate(vectors):
            c = selection_counts(w, k, seed + i, trials)
            counts[k].append(c)
            if stats.chisq_gof(c, exact_distribution(w)) > alpha:
                passed += 1
        report.add(f"sampling exactness k={k}",
                   passed >= min_pass,
                   f"{passed}/{n_vectors} vectors fit at alpha={alpha} "
                   f"(need >= {min_pass})")
    return report, counts


def k_invariance_suite(counts_by_k: dict[int, list[np.ndarray]],
                       alpha: float = DEFAULT_ALPHA) -> SuiteReport:
    """Cross-k two-sample comparison of the histograms from gof_suite."""
    report = SuiteReport()
    ks = sorted(counts_by_k)
    base = ks[0]
    for k in ks[1:]:
        pvals = [stats.chisq_two_sample(a, b)
                 for a, b in zip(counts_by_k[base], counts_by_k[k])]
        n_pass = sum(p > alpha for p in pvals)
        need = len(pvals) - max(1, len(pvals) // 25)
        report.add(f"block-size invariance k={base} vs k={k}",
                   n_pass >= need,
                   f"{n_pass}/{len(pvals)} vectors indistinguishable at alpha={alpha}")
    return report


def oracle_agreement_suite(seed: int, n_vectors: int = 20, trials: int = 1_000_000,
                           k: int = 16, max_len: int = 64, max_weight: int = 1000,
                           alpha: float = DEFAULT_ALPHA) -> SuiteReport:
    """Inverse-transform sampling vs. the block reservoir path, two sample."""
    vectors = random_weight_vectors(seed + 1000, n_vectors, max_len, max_weight)
    report = SuiteReport()
    n_pass = 0
    for i, w in enumerate(vectors):
        res_counts = selection_counts(w, k, seed + i, trials)
        inv = inverse_transform_many(w, seed + i, (1 << 56) + 4, trials)
        inv_counts = np.bincount(inv, minlength=len(w))
        if stats.chisq_two_sample(res_counts, inv_counts) > alpha:
            n_pass += 1
    report.add("oracle agreement (inverse transform vs block reservoir)",
               n_pass == n_vectors,
               f"{n_pass}/{n_vectors} vectors indistinguishable at alpha={alpha}")
    return report


class _BiasedStream:
    """Deliberately broken stream for the negative control: draws are halved,
    which inflates every acceptance probability."""

    def __init__(self, inner: rng.RngStream):
        self.inner = inner

    def next_u32(self) -> int:
        return self.inner.next_u32() >> 1


def negative_control(seed: int, trials: int = 20_000,
                     alpha: float = DEFAULT_ALPHA) -> SuiteReport:
    """A biased generator must make the goodness-of-fit test fail; if it
    does not, the test has no power and the suite cannot be trusted."""
    weights = np.array([3, 1, 4, 1, 5], dtype=np.uint64)
    counts = np.zeros(len(weights), dtype=np.int64)
    for t in range(trials):
        stream = _BiasedStream(rng.RngStream(seed, t))
        res = wrs_sequential(((i, int(w)) for i, w in enumerate(weights)), stream)
        counts[res.selected] += 1
    p = stats.chisq_gof(counts, exact_distribution(weights))
    report = SuiteReport()
    report.add("negative control (biased generator must fail)",
               p <= alpha,
               f"biased sampler p={p:.3g} (must be <= {alpha})")
    return report


def run_validation(seed: int = 42, n_vectors: int = 50, ks=DEFAULT_KS,
                   trials: int = 50_000, alpha: float = DEFAULT_ALPHA) -> SuiteReport:
    """The full validation battery used by the CLI."""
    report, counts = gof_suite(seed, n_vectors=n_vectors, ks=ks, trials=trials,
                               alpha=alpha)
    for check in k_invariance_suite(counts, alpha).checks:
        report.checks.append(check)
    for check in oracle_agreement_suite(seed, n_vectors=min(20, n_vectors),
                                        trials=max(trials, 100_000), alpha=alpha).checks:
        report.checks.append(check)
    for check in negative_control(seed).checks:
        report.checks.append(check)
    return report
