"""Tests for the lanergbd command-line toolbench."""

import pytest

from pyLaneRGBD.harness.bench import MACHINE_HEADER
from pyLaneRGBD.harness.cli import EXIT_INPUT, EXIT_IO, EXIT_OK, RESULTS_FILE, main
from pyLaneRGBD.harness.pipeline import RESULTS_HEADER, read_results


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "data"
    assert main(["generate", "--out", str(out), "--frames", "2", "--seed", "1"]) == EXIT_OK
    return out


class TestGenerate:
    def test_writes_dataset(self, generated):
        names = {p.name for p in generated.iterdir()}
        assert {"000000.gray.pgm", "000001.depth.pgm", "000001.mask.pgm", "000000.plane.txt",
                "camera.txt", "manifest.txt"} <= names
        assert "spec.seed = 1" in (generated / "manifest.txt").read_text()

    def test_scenario_choice(self, tmp_path):
        out = tmp_path / "fog"
        assert main(["generate", "--out", str(out), "--frames", "1", "--scenario", "fog"]) == EXIT_OK
        assert "spec.fog_density = 0.08" in (out / "manifest.txt").read_text()

    def test_zero_frames(self, tmp_path):
        assert main(["generate", "--out", str(tmp_path / "x"), "--frames", "0"]) == EXIT_INPUT

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("not a directory")
        assert main(["generate", "--out", str(blocker / "sub"), "--frames", "1"]) == EXIT_IO


class TestUsage:
    def test_unknown_command(self):
        assert main(["frobnicate"]) == EXIT_INPUT

    def test_missing_required_option(self):
        assert main(["generate", "--frames", "1"]) == EXIT_INPUT

    def test_bad_option_value(self, tmp_path):
        assert main(["generate", "--out", str(tmp_path), "--frames", "many"]) == EXIT_INPUT

    def test_help(self, capsys):
        assert main(["--help"]) == EXIT_OK
        assert "lanergbd" in capsys.readouterr().out


class TestDetect:
    def test_results_and_overlays(self, generated, tmp_path):
        out = tmp_path / "run"
        code = main(["detect", str(generated), "--out", str(out), "--overlay"])
        assert code == EXIT_OK
        lines = (out / RESULTS_FILE).read_text().splitlines()
        assert lines[0] == RESULTS_HEADER
        assert [r.index for r in read_results(out / RESULTS_FILE)] == [0, 1]
        assert (out / "000000.overlay.pgm").is_file()
        assert (out / "000001.overlay.pgm").is_file()

    def test_repeat_runs_are_identical(self, generated, tmp_path):
        assert main(["detect", str(generated), "--out", str(tmp_path / "a")]) == EXIT_OK
        assert main(["-v", "detect", str(generated), "--out", str(tmp_path / "b")]) == EXIT_OK
        first = (tmp_path / "a" / RESULTS_FILE).read_bytes()
        assert first == (tmp_path / "b" / RESULTS_FILE).read_bytes()

    def test_no_feedback_with_workers(self, generated, tmp_path):
        code = main(["detect", str(generated), "--no-feedback", "--workers", "2",
                     "--out", str(tmp_path)])
        assert code == EXIT_OK

    def test_missing_dataset(self, tmp_path):
        assert main(["detect", str(tmp_path / "nowhere")]) == EXIT_INPUT

    def test_bad_config(self, generated, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("gamma = 2\n")
        assert main(["detect", str(generated), "--config", str(cfg),
                     "--out", str(tmp_path)]) == EXIT_INPUT

    def test_missing_config_file(self, generated, tmp_path):
        code = main(["detect", str(generated), "--config", str(tmp_path / "none.cfg"),
                     "--out", str(tmp_path)])
        assert code == EXIT_IO


class TestEvalAndBench:
    def test_eval_prints_rates_and_timings(self, generated, capsys):
        assert main(["eval", str(generated)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "True positive rate:" in out
        lines = out.splitlines()
        assert MACHINE_HEADER in lines
        stages = [line.split(",")[0] for line in lines[lines.index(MACHINE_HEADER) + 1:]]
        assert stages == ["preprocess", "matching", "respond", "enhance", "lanefit", "total"]

    def test_eval_needs_ground_truth(self, generated, tmp_path):
        for path in generated.glob("000000.*"):
            (tmp_path / path.name).write_bytes(path.read_bytes())
        (tmp_path / "000000.mask.pgm").unlink()
        assert main(["eval", str(tmp_path)]) == EXIT_INPUT

    def test_bench(self, generated, capsys):
        assert main(["bench", str(generated)]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("Frames: 2")
        assert MACHINE_HEADER in out
