import numpy as np

from gdrw import validation


def test_weight_vectors_are_deterministic_and_in_range():
    a = validation.random_weight_vectors(1, 10, max_len=32, max_weight=50)
    b = validation.random_weight_vectors(1, 10, max_len=32, max_weight=50)
    assert len(a) == 10
    for va, vb in zip(a, b):
        assert np.array_equal(va, vb)
        assert 1 <= len(va) <= 32
        assert va.min() >= 1 and va.max() <= 50


def test_gof_suite_passes_at_small_scale():
    report, counts = validation.gof_suite(7, n_vectors=10, ks=(1, 4),
                                          trials=20_000, max_len=32)
    assert report.passed, [c.line() for c in report.checks]
    assert set(counts) == {1, 4}
    assert all(len(c) == 10 for c in counts.values())


def test_k_invariance_suite():
    _, counts = validation.gof_suite(8, n_vectors=8, ks=(1, 16),
                                     trials=20_000, max_len=32)
    report = validation.k_invariance_suite(counts)
    assert report.passed, [c.line() for c in report.checks]


def test_oracle_agreement_suite():
    report = validation.oracle_agreement_suite(9, n_vectors=5, trials=50_000,
                                               max_len=24)
    assert report.passed, [c.line() for c in report.checks]


def test_gof_suite_holds_across_seeds():
    # 5 seeds x 10 vectors: the pass gate must hold for each batch
    for seed in range(1, 6):
        report, _ = validation.gof_suite(seed, n_vectors=10, ks=(16,),
                                         trials=20_000, max_len=64)
        assert report.passed, (seed, [c.line() for c in report.checks])


def test_negative_control_detects_bias():
    report = validation.negative_control(11, trials=5_000)
    assert report.passed, [c.line() for c in report.checks]


def test_report_lines_format():
    report = validation.negative_control(11, trials=2_000)
    line = report.checks[0].line()
    assert line.startswith("[PASS]") or line.startswith("[FAIL]")
