"""Tests for dataset pipeline runs, the results file, evaluation and timing reports."""

import math

import numpy as np
import pytest

from pyLaneRGBD.core.dataset import Dataset
from pyLaneRGBD.core.detector import DetectionResult, LaneDetector
from pyLaneRGBD.core.errors import FormatError, InputError
from pyLaneRGBD.core.lane_types import FrameStatus, Side, SkipReason, Verdict
from pyLaneRGBD.core.pnm import save_depth, save_gray
from pyLaneRGBD.core.rasters import DepthImage, GrayImage
from pyLaneRGBD.harness.bench import MACHINE_HEADER, bench_report, stage_stats
from pyLaneRGBD.harness.evaluation import chain_hit_fraction, evaluate, marker_distance
from pyLaneRGBD.harness.pipeline import (
    RESULTS_HEADER,
    format_result,
    parse_result_line,
    read_results,
    run_pipeline,
    write_results,
)
from pyLaneRGBD.stages.enhance import MarkerChain
from pyLaneRGBD.stages.lanefit import LanePlane
from pyLaneRGBD.utils.overlay import CROSS_VALUE, render_overlay


def _black_dataset(root, frames=3, shape=(60, 80)):
    for index in range(frames):
        save_gray(GrayImage(np.zeros(shape, dtype=np.uint8)), root / f"{index:06d}.gray.pgm")
        save_depth(DepthImage(np.zeros(shape)), root / f"{index:06d}.depth.pgm")
    return Dataset.open(root)


def _timed(timings, index=0):
    return DetectionResult(index, FrameStatus.SKIPPED, SkipReason.NO_PEAK, stage_timings=timings)


def _oracle_results(dataset, offset=(0.0, 0.0)):
    """Results whose plane is the truth and whose chains sit on marker pixels."""
    results = []
    for index in dataset.indices:
        marker, _ = dataset.load_masks(index)
        truth = LanePlane.from_line(dataset.read_plane_line(index))
        rows, cols = np.nonzero(marker)
        centres = np.column_stack([cols, rows]).astype(np.float64)[::25] + offset
        left = MarkerChain(Side.LEFT, centres[centres[:, 0] < marker.shape[1] / 2], 2.4)
        right = MarkerChain(Side.RIGHT, centres[centres[:, 0] >= marker.shape[1] / 2], 0.7)
        results.append(DetectionResult(index, FrameStatus.DETECTED, None, left, right, truth,
                                       refined_theta=2.4))
    return results


class TestDetectionResult:
    def test_detected_needs_plane(self):
        with pytest.raises(ValueError):
            DetectionResult(0, FrameStatus.DETECTED)

    def test_skipped_needs_reason(self):
        with pytest.raises(ValueError):
            DetectionResult(0, FrameStatus.SKIPPED)

    def test_status_text(self):
        assert _timed({}).status_text() == "skipped:no-peak"


class TestRunPipeline:
    def test_black_frames_are_skipped(self, tmp_path):
        results = run_pipeline(_black_dataset(tmp_path))
        assert len(results) == 3
        assert all(r.skip_reason is SkipReason.NO_PEAK for r in results)
        assert all(r.plane is None for r in results)

    def test_clean_road_is_detected(self, tiny_dataset, half_config):
        results = run_pipeline(tiny_dataset, half_config)
        assert [r.frame_index for r in results] == [0, 1, 2, 3]
        assert sum(r.detected for r in results) >= 3
        for r in results:
            assert set(r.stage_timings) == {"preprocess", "matching", "respond", "enhance", "lanefit"}
            assert all(t >= 0 for t in r.stage_timings.values())

    def test_detected_plane_is_close_to_truth(self, tiny_dataset, half_config):
        dataset = Dataset.open(tiny_dataset)
        for r in run_pipeline(dataset, half_config):
            if r.detected:
                truth = LanePlane.from_line(dataset.read_plane_line(r.frame_index))
                assert r.plane.angle_to(truth) < 5.0
                assert r.plane.normal[1] > 0

    def test_results_file_is_deterministic(self, tiny_dataset, half_config, tmp_path):
        write_results(run_pipeline(tiny_dataset, half_config), tmp_path / "a.txt")
        write_results(run_pipeline(tiny_dataset, half_config), tmp_path / "b.txt")
        assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()

    def test_workers_match_sequential_run(self, tiny_dataset, half_config):
        sequential = run_pipeline(tiny_dataset, half_config, feedback=False)
        threaded = run_pipeline(tiny_dataset, half_config, feedback=False, workers=3)
        assert [format_result(r) for r in threaded] == [format_result(r) for r in sequential]

    def test_keep_maps(self, tiny_dataset, half_config):
        results = run_pipeline(tiny_dataset, half_config, keep_maps=True)
        assert results[0].maps is not None
        assert results[0].maps.left.shape == (240, 320)

    def test_feedback_carries_angle(self, tiny_dataset, half_config):
        dataset = Dataset.open(tiny_dataset)
        detector = LaneDetector(half_config)
        first = detector.detect(dataset.load_frame(0))
        if first.detected:
            assert detector.refined
            assert detector.left_theta == pytest.approx(first.refined_theta)
        detector.reset()
        assert not detector.refined
        assert detector.left_theta == half_config.template_theta


class TestResultsFile:
    def test_round_trip(self, tmp_path):
        plane = LanePlane(np.array([0.0, 0.98, 0.17]), np.array([0.1, 1.5, 0.2]))
        chain = MarkerChain(Side.LEFT, np.zeros((4, 2)), 2.4)
        detected = DetectionResult(7, FrameStatus.DETECTED, None, chain, chain, plane,
                                   refined_theta=math.radians(140.0))
        skipped = DetectionResult(8, FrameStatus.SKIPPED, SkipReason.DEPTH_GAP)
        write_results([detected, skipped], tmp_path / "r.txt")
        lines = (tmp_path / "r.txt").read_text().splitlines()
        assert lines[0] == RESULTS_HEADER
        assert lines[2].startswith("8,skipped:depth-gap,nan,nan,nan,nan,nan,nan")
        back = read_results(tmp_path / "r.txt")
        assert back[0].index == 7
        assert back[0].theta_deg == pytest.approx(140.0)
        assert (back[0].chain_len_left, back[0].chain_len_right) == (4, 4)
        assert back[1].skip_reason is SkipReason.DEPTH_GAP
        assert all(math.isnan(v) for v in back[1].normal)

    def test_bad_line(self):
        with pytest.raises(FormatError):
            parse_result_line("1,detected,0,1")
        with pytest.raises(FormatError):
            parse_result_line("1,maybe,0,1,0,0,0,0,0,1,1")

    def test_missing_header(self, tmp_path):
        (tmp_path / "r.txt").write_text("0,skipped:no-peak,nan,nan,nan,nan,nan,nan,nan,0,0\n")
        with pytest.raises(FormatError):
            read_results(tmp_path / "r.txt")


class TestEvaluate:
    def test_oracle_results_are_all_true_positives(self, tiny_dataset):
        dataset = Dataset.open(tiny_dataset)
        report = evaluate(_oracle_results(dataset), dataset)
        assert report.frames == 4
        assert report.true_positive_rate == 1.0
        assert report.false_positive_rate == 0.0
        assert report.count(Verdict.TRUE_POSITIVE) == 4

    def test_displaced_chains_are_false_positives(self, tiny_dataset):
        dataset = Dataset.open(tiny_dataset)
        report = evaluate(_oracle_results(dataset, offset=(0.0, -60.0)), dataset)
        assert report.false_positive_rate == 1.0
        assert report.true_positive_rate == 0.0

    def test_tilted_plane_is_not_a_true_positive(self, tiny_dataset):
        dataset = Dataset.open(tiny_dataset)
        results = _oracle_results(dataset)
        for r in results:
            r.plane = LanePlane(np.array([0.0, math.cos(0.5), -math.sin(0.5)]), r.plane.point)
        report = evaluate(results, dataset)
        assert report.true_positive_rate == 0.0
        assert report.count(Verdict.MISS) == 4

    def test_all_skipped(self, tiny_dataset):
        results = [DetectionResult(i, FrameStatus.SKIPPED, SkipReason.NO_PEAK) for i in range(4)]
        report = evaluate(results, tiny_dataset)
        assert (report.true_positive_rate, report.false_positive_rate) == (0.0, 0.0)
        assert report.count(Verdict.SKIPPED) == 4
        assert "True positive rate:  0.0%" in report.summary()

    def test_missing_ground_truth(self, tmp_path):
        dataset = _black_dataset(tmp_path, frames=1)
        with pytest.raises(InputError):
            evaluate([DetectionResult(0, FrameStatus.SKIPPED, SkipReason.NO_PEAK)], dataset)

    def test_results_must_cover_frames(self, tiny_dataset):
        with pytest.raises(InputError):
            evaluate([DetectionResult(0, FrameStatus.SKIPPED, SkipReason.NO_PEAK)], tiny_dataset)

    def test_marker_distance(self):
        mask = np.zeros((5, 5), dtype=bool)
        mask[2, 2] = True
        distance = marker_distance(mask)
        assert distance[2, 2] == 0.0
        assert distance[2, 4] == 2.0
        assert np.all(np.isinf(marker_distance(np.zeros((3, 3), dtype=bool))))

    def test_chain_hit_fraction(self):
        mask = np.zeros((10, 10), dtype=bool)
        mask[:, 2] = True
        centres = np.array([[2.4, 1.0], [3.0, 5.0], [9.0, 5.0], [8.0, 0.0]])
        assert chain_hit_fraction(centres, marker_distance(mask), 1.0) == 0.5
        assert chain_hit_fraction(np.zeros((0, 2)), marker_distance(mask), 1.0) == 0.0


class TestBench:
    TIMES = {"preprocess": 4.0, "matching": 3.0, "respond": 2.0, "enhance": 0.5, "lanefit": 0.1}

    def test_single_result_arithmetic(self):
        stats = {s.stage: s for s in stage_stats([_timed(self.TIMES)])}
        assert stats["total"].mean == pytest.approx(9.6)
        assert stats["preprocess"].share == pytest.approx(4.0 / 9.6)
        assert round(stats["preprocess"].share * 100, 1) == 41.7
        assert stats["lanefit"].p95 == pytest.approx(0.1)

    def test_mean_median_p95(self):
        results = [_timed({"preprocess": float(k)}) for k in range(1, 21)]
        pre = stage_stats(results)[0]
        assert pre.mean == pytest.approx(10.5)
        assert pre.median == pytest.approx(10.5)
        assert pre.p95 == pytest.approx(np.percentile(np.arange(1, 21), 95))

    def test_zero_timings(self):
        stats = stage_stats([_timed({})])
        assert all(s.share == 0.0 for s in stats)

    def test_needs_results(self):
        with pytest.raises(ValueError):
            stage_stats([])

    def test_report_has_machine_lines(self):
        report = bench_report([_timed(self.TIMES)])
        lines = report.splitlines()
        assert MACHINE_HEADER in lines
        machine = lines[lines.index(MACHINE_HEADER) + 1:]
        assert machine[0] == "preprocess,4.0000,4.0000,4.0000,0.4167"
        assert machine[-1].startswith("total,9.6000")
        assert "41.7%" in report


class TestOverlay:
    def test_marks_centres_and_peaks(self):
        gray = GrayImage(np.zeros((40, 40), dtype=np.uint8))
        plane = LanePlane(np.array([0.0, 1.0, 0.0]), np.zeros(3))
        left = MarkerChain(Side.LEFT, np.array([[10.0, 10.0]]), 2.0)
        right = MarkerChain(Side.RIGHT, np.array([[30.2, 29.6]]), 1.0)
        result = DetectionResult(0, FrameStatus.DETECTED, None, left, right, plane,
                                 left_peak=(10, 10), right_peak=(30, 30))
        canvas = render_overlay(gray, result).data
        assert canvas[10, 13] == CROSS_VALUE
        assert canvas[10, 16] == CROSS_VALUE
        assert canvas[30, 30] == CROSS_VALUE
        assert canvas[0, 0] == 0
        assert not gray.data.any()

    def test_crosses_clip_at_border(self):
        gray = GrayImage(np.zeros((8, 8), dtype=np.uint8))
        left = MarkerChain(Side.LEFT, np.array([[0.0, 0.0], [20.0, 20.0]]), 2.0)
        result = DetectionResult(0, FrameStatus.SKIPPED, SkipReason.DEPTH_GAP, left_chain=left)
        canvas = render_overlay(gray, result).data
        assert canvas[0, :4].tolist() == [CROSS_VALUE] * 4
        assert canvas[0, 4] == 0
