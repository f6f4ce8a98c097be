import math

import numpy as np
import pytest

from chwedge.bank import BankParams
from chwedge.bench import (
    RocResult,
    auc,
    auc_trapezoid,
    bench_compare,
    build_detector,
    roc_points,
    roc_run,
)
from chwedge.synth import sample_scene, trial_rng, truth_label


class _OracleDetector:
    """Scores 1 on true scenes and 0 otherwise (perfect separation)."""

    name = "oracle"

    def __init__(self, width):
        self.width = width
        self.index = 0

    def score(self, frame):
        scene = sample_scene(trial_rng(1, self.index))
        self.index += 1
        return 1.0 if truth_label(scene, self.width) else 0.0


class _NoiseDetector:
    """Seeded noise independent of the scene."""

    name = "noise"

    def __init__(self, seed=99):
        self.rng = np.random.default_rng(seed)

    def score(self, frame):
        return float(self.rng.normal())


class TestAuc:
    def test_perfect_step(self):
        assert auc_trapezoid(np.array([0.0]), np.array([1.0])) == pytest.approx(1.0)

    def test_diagonal(self):
        pts = np.linspace(0.9, 0.1, 9)
        assert auc_trapezoid(pts, pts) == pytest.approx(0.5)

    def test_hand_built_three_point_curve(self):
        assert auc_trapezoid(np.array([0.2]), np.array([0.8])) == pytest.approx(0.80)

    def test_rejects_mismatched_arrays(self):
        with pytest.raises(ValueError):
            auc_trapezoid(np.array([0.1, 0.2]), np.array([0.5]))

    def test_result_wrapper_matches(self):
        r = RocResult(
            width=1.0, detector="x", trials=10, seed=0, supersample=1,
            thresholds=np.array([0.5]), pf=np.array([0.2]), pd=np.array([0.8]),
            auc=0.8,
        )
        assert auc(r) == pytest.approx(0.80)


class TestRocPoints:
    def test_rates_are_strictly_above_threshold(self):
        scores = np.array([0.1, 0.4, 0.4, 0.9])
        labels = np.array([False, False, True, True])
        thresholds, pf, pd = roc_points(scores, labels)
        assert list(thresholds) == [0.1, 0.4, 0.9]
        assert list(pf) == [0.5, 0.0, 0.0]
        assert list(pd) == [1.0, 0.5, 0.0]

    def test_monotone_non_increasing(self):
        rng = np.random.default_rng(0)
        scores = rng.normal(size=500)
        labels = rng.uniform(size=500) < 0.3
        _, pf, pd = roc_points(scores, labels)
        assert np.all(np.diff(pf) <= 0)
        assert np.all(np.diff(pd) <= 0)

    def test_rejects_single_class(self):
        with pytest.raises(ValueError):
            roc_points(np.array([1.0, 2.0]), np.array([True, True]))


class TestRocRun:
    def test_truth_oracle_reaches_unit_area(self):
        width = math.pi / 2
        r = roc_run(_OracleDetector(width), width, 400, seed=1, supersample=1)
        assert r.auc == pytest.approx(1.0)

    def test_noise_detector_sits_at_half(self):
        r = roc_run(_NoiseDetector(), math.pi / 2, 10000, seed=1, supersample=1)
        assert r.auc == pytest.approx(0.5, abs=0.02)

    def test_bit_exact_reproducibility(self):
        det = build_detector("A", math.pi / 2)
        a = roc_run(det, math.pi / 2, 150, seed=5)
        b = roc_run(det, math.pi / 2, 150, seed=5)
        assert np.array_equal(a.thresholds, b.thresholds)
        assert np.array_equal(a.pf, b.pf)
        assert np.array_equal(a.pd, b.pd)
        assert a.auc == b.auc
        c = roc_run(det, math.pi / 2, 150, seed=6)
        assert not np.array_equal(a.thresholds, c.thresholds)

    def test_rank_invariance_under_monotone_remap(self):
        base = build_detector("A", math.pi / 2)

        class Remapped:
            name = "A-remap"

            def score(self, frame):
                return math.atan(0.01 * base.score(frame)) * 3.0 + 7.0

        a = roc_run(base, math.pi / 2, 300, seed=2)
        b = roc_run(Remapped(), math.pi / 2, 300, seed=2)
        assert b.auc == a.auc  # identical ranks, identical area

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            roc_run(_NoiseDetector(), math.pi / 2, 0, seed=1)


class TestDetectors:
    def test_kinds_and_names(self):
        for kind in "ABCDE":
            det = build_detector(kind, math.pi / 2)
            assert det.name == kind

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            build_detector("F", math.pi / 2)

    def test_contrast_detector_prefers_matching_frames(self):
        from chwedge.synth import WedgeScene, render_wedge

        det = build_detector("A", math.pi / 2)
        match = render_wedge(WedgeScene(math.pi / 4, 1.0, 0.0, 0.0), 4)
        flat = np.full((25, 25), 100.0)
        assert det.score(match) > det.score(flat) + 1.0

    def test_correlation_detectors_bounded(self):
        from chwedge.synth import WedgeScene, render_wedge

        frame = render_wedge(WedgeScene(0.5, 2.0, 1.0, 1.0), 4)
        for kind in "BC":
            det = build_detector(kind, math.pi / 2)
            assert -1.0 - 1e-9 <= det.score(frame) <= 1.0 + 1e-9


class TestBenchCompare:
    def test_op_counts_match_formula(self):
        report = bench_compare(32, BankParams(3.0, 12, 6), repeats=1)
        per = report["op_counts"]["per_filter"]
        assert per[6] == {"l": 6, "separable_ops": 2 * 25 * 7, "direct_ops": 625}
        assert per[6]["separable_ops"] == 350
        assert report["op_counts"]["direct_total"] == 7 * 625
        assert report["op_counts"]["separable_total"] == 25 * 7 * 8
        assert report["op_counts"]["theoretical_ratio"] == pytest.approx(4375 / 1400)

    def test_outputs_agree(self):
        report = bench_compare(48, BankParams(3.0, 12, 6), repeats=1)
        assert report["max_rel_err"] < 1e-9
        assert report["t_separable_s"] > 0 and report["t_direct_s"] > 0

    def test_rejects_zero_repeats_and_small_images(self):
        with pytest.raises(ValueError):
            bench_compare(64, BankParams(3.0, 12, 6), repeats=0)
        with pytest.raises(ValueError):
            bench_compare(16, BankParams(3.0, 12, 6), repeats=1)
