"""Statistical checks shared by the validation suites and the test oracles."""

from __future__ import annotations

import numpy as np
from scipy import stats as sps


def _merge_prefix(expected: np.ndarray, min_expected: float) -> int:
    """Length of the ascending-sorted prefix to merge into one bin so that
    the merged bin and every remaining bin expect at least min_expected.
    Returns 0 when no merging is needed."""
    n = len(expected)
    csum = np.cumsum(expected)
    m = -1
    while True:
        pooled_ok = m < 0 or csum[m] >= min_expected
        rest_ok = m + 1 >= n or expected[m + 1] >= min_expected
        if (pooled_ok and rest_ok) or m >= n - 1:
            break
        m += 1
    return m + 1


def pool_bins(counts: np.ndarray, expected: np.ndarray, min_expected: float = 5.0):
    """Merge low-expectation categories so the chi-square approximation is
    valid; returns (pooled_counts, pooled_expected)."""
    counts = np.asarray(counts, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    order = np.argsort(expected, kind="stable")
    counts, expected = counts[order], expected[order]
    m = _merge_prefix(expected, min_expected)
    if m:
        counts = np.concatenate([[counts[:m].sum()], counts[m:]])
        expected = np.concatenate([[expected[:m].sum()], expected[m:]])
    return counts, expected


def chisq_gof(counts: np.ndarray, probs: np.ndarray, min_expected: float = 5.0) -> float:
    """Goodness-of-fit p-value of observed category counts against the given
    probabilities; low-expectation bins are pooled first.  A distribution
    that degenerates to a single bin trivially fits (p = 1)."""
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    expected = np.asarray(probs, dtype=np.float64) * n
    counts, expected = pool_bins(counts, expected, min_expected)
    if len(counts) < 2:
        return 1.0
    # guard against rounding drift between the sums
    expected *= counts.sum() / expected.sum()
    return float(sps.chisquare(counts, f_exp=expected).pvalue)


def chisq_two_sample(counts_a: np.ndarray, counts_b: np.ndarray,
                     min_expected: float = 5.0) -> float:
    """Two-sample chi-square p-value that the two count vectors come from the
    same categorical distribution; categories are pooled on combined counts."""
    a = np.asarray(counts_a, dtype=np.float64)
    b = np.asarray(counts_b, dtype=np.float64)
    combined = a + b
    keep = combined > 0
    a, b, combined = a[keep], b[keep], combined[keep]
    if len(combined) < 2:
        return 1.0
    order = np.argsort(combined, kind="stable")
    a, b, combined = a[order], b[order], combined[order]
    # the smaller sample sees scale * combined[i] expected counts in bin i
    scale = min(a.sum(), b.sum()) / combined.sum()
    m = _merge_prefix(combined * scale, min_expected)
    if m:
        a = np.concatenate([[a[:m].sum()], a[m:]])
        b = np.concatenate([[b[:m].sum()], b[m:]])
    if len(a) < 2:
        return 1.0
    return float(sps.chi2_contingency(np.stack([a, b]), correction=False).pvalue)


def serial_correlation_z(values: np.ndarray) -> float:
    """Standardized lag-1 autocorrelation; ~N(0,1) under independence."""
    x = np.asarray(values, dtype=np.float64)
    x = x - x.mean()
    denom = float(np.dot(x, x))
    if denom == 0.0:
        return 0.0
    rho = float(np.dot(x[:-1], x[1:])) / denom
    return rho * np.sqrt(len(x))


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Total-variation distance between two probability vectors."""
    return 0.5 * float(np.abs(np.asarray(p, dtype=np.float64)
                              - np.asarray(q, dtype=np.float64)).sum())
