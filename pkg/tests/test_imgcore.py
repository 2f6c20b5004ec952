"""Tests for rasters, the PNM codec, configuration and the dataset layout."""

import numpy as np
import pytest

from pyLaneRGBD.core.camera import CameraIntrinsics
from pyLaneRGBD.core.config import Config, parse_config
from pyLaneRGBD.core.dataset import CAMERA_FILE, Dataset, write_mask
from pyLaneRGBD.core.errors import ConfigError, FormatError, InputError
from pyLaneRGBD.core.pnm import (
    PnmImage,
    depth_from_pnm,
    gray_from_pnm,
    load_float_map,
    load_frame_pair,
    read_pnm,
    save_depth,
    save_float_map,
    save_gray,
    write_pnm,
)
from pyLaneRGBD.core.rasters import DepthImage, FloatMap, GrayImage


def _write_depth_mm(path, values):
    write_pnm(path, PnmImage(np.asarray(values, dtype=np.uint16), 65535))


def _write_gray(path, values):
    write_pnm(path, PnmImage(np.asarray(values, dtype=np.uint8), 255))


class TestCameraIntrinsics:
    def test_rejects_non_positive_focal(self):
        with pytest.raises(ValueError):
            CameraIntrinsics(0.0, 500.0, 320.0, 240.0, 640, 480)

    def test_rejects_principal_point_outside(self):
        with pytest.raises(ValueError):
            CameraIntrinsics(500.0, 500.0, 640.0, 240.0, 640, 480)

    def test_default_camera(self):
        cam = CameraIntrinsics.default(640, 480)
        assert (cam.fx, cam.fy, cam.cx, cam.cy) == (500.0, 500.0, 320.0, 240.0)

    def test_line_round_trip(self):
        cam = CameraIntrinsics(512.25, 498.5, 319.75, 241.125, 640, 480)
        assert CameraIntrinsics.from_line(cam.to_line()) == cam


class TestRasters:
    def test_depth_invalid_pixels_carry_zero(self):
        depth = DepthImage(np.array([[2.0, 3.0]]), valid=np.array([[True, False]]))
        assert depth.data[0, 1] == 0.0
        assert not depth.valid[0, 1]

    def test_valid_depth_must_be_positive(self):
        with pytest.raises(InputError):
            DepthImage(np.array([[0.0]]), valid=np.array([[True]]))

    def test_rasters_are_read_only(self):
        gray = GrayImage(np.zeros((2, 2), dtype=np.uint8))
        with pytest.raises(ValueError):
            gray.data[0, 0] = 1


class TestPnm:
    def test_16_bit_round_trip_is_byte_identical(self, tmp_path):
        path = tmp_path / "a.pgm"
        _write_depth_mm(path, [[0, 1, 65535], [256, 1000, 4242]])
        image = read_pnm(path)
        copy = tmp_path / "b.pgm"
        write_pnm(copy, image)
        assert copy.read_bytes() == path.read_bytes()

    def test_header_comments_are_skipped(self, tmp_path):
        path = tmp_path / "c.pgm"
        path.write_bytes(b"P5\n# made by hand\n2 1\n# another\n255\n" + bytes([7, 9]))
        image = read_pnm(path)
        assert image.pixels.tolist() == [[7, 9]]
        assert image.comments == [" made by hand", " another"]

    def test_truncated_raster(self, tmp_path):
        path = tmp_path / "t.pgm"
        path.write_bytes(b"P5\n4 4\n255\n" + bytes(10))
        with pytest.raises(FormatError):
            read_pnm(path)

    def test_ascii_magic_rejected(self, tmp_path):
        path = tmp_path / "p2.pgm"
        path.write_bytes(b"P2\n1 1\n255\n7\n")
        with pytest.raises(FormatError):
            read_pnm(path)

    def test_depth_millimetres_to_metres(self, tmp_path):
        path = tmp_path / "d.pgm"
        _write_depth_mm(path, [[2000, 0]])
        depth = depth_from_pnm(read_pnm(path))
        assert depth.data.tolist() == [[2.0, 0.0]]
        assert depth.valid.tolist() == [[True, False]]

    def test_depth_save_round_trip(self, tmp_path):
        stored = np.array([[1, 1500, 60000]], dtype=np.uint16)
        path = tmp_path / "d.pgm"
        _write_depth_mm(path, stored)
        depth = depth_from_pnm(read_pnm(path))
        np.testing.assert_array_equal(np.floor(depth.data * 1000 + 0.5), stored)
        again = tmp_path / "e.pgm"
        save_depth(depth, again)
        assert again.read_bytes() == path.read_bytes()

    def test_gray_needs_8_bit(self, tmp_path):
        path = tmp_path / "g.pgm"
        _write_depth_mm(path, [[1, 2]])
        with pytest.raises(FormatError):
            gray_from_pnm(read_pnm(path))

    def test_colour_frames_use_luma(self, tmp_path):
        path = tmp_path / "c.ppm"
        pixels = np.array([[[255, 0, 0], [0, 255, 0], [255, 255, 255]]], dtype=np.uint8)
        write_pnm(path, PnmImage(pixels, 255, magic=b'P6'))
        gray = gray_from_pnm(read_pnm(path))
        assert gray.data.tolist() == [[76, 150, 255]]


class TestLoadFramePair:
    def test_matching_sizes(self, tmp_path):
        _write_gray(tmp_path / "g.pgm", np.full((48, 64), 90))
        _write_depth_mm(tmp_path / "d.pgm", np.full((48, 64), 3000))
        frame = load_frame_pair(tmp_path / "g.pgm", tmp_path / "d.pgm")
        assert (frame.width, frame.height) == (64, 48)
        assert frame.camera == CameraIntrinsics.default(64, 48)

    def test_size_mismatch(self, tmp_path):
        _write_gray(tmp_path / "g.pgm", np.zeros((48, 64)))
        _write_depth_mm(tmp_path / "d.pgm", np.zeros((24, 32)))
        with pytest.raises(InputError):
            load_frame_pair(tmp_path / "g.pgm", tmp_path / "d.pgm")

    def test_missing_file_is_os_error(self, tmp_path):
        with pytest.raises(OSError):
            load_frame_pair(tmp_path / "none.pgm", tmp_path / "none.depth.pgm")


class TestFloatMap:
    def test_zero_map(self, tmp_path):
        save_float_map(FloatMap.zeros(3, 4), tmp_path / "z.pgm")
        assert not read_pnm(tmp_path / "z.pgm").pixels.any()

    def test_unit_value_hits_full_scale(self, tmp_path):
        save_float_map(FloatMap(np.ones((2, 2))), tmp_path / "o.pgm")
        image = read_pnm(tmp_path / "o.pgm")
        assert image.pixels.tolist() == [[65535, 65535], [65535, 65535]]
        assert image.comments == [" scale=1.0"]

    def test_round_trip_within_quantisation(self, tmp_path):
        rng = np.random.default_rng(3)
        data = rng.uniform(0.0, 1.4, (16, 20))
        save_float_map(FloatMap(data), tmp_path / "m.pgm")
        back = load_float_map(tmp_path / "m.pgm")
        scale = data.max()
        assert np.max(np.abs(back.data - data)) <= scale / 65535

    def test_non_finite_rejected(self, tmp_path):
        with pytest.raises(InputError):
            save_float_map(FloatMap(np.array([[np.nan]])), tmp_path / "n.pgm")


class TestConfig:
    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.cfg"
        path.write_text("")
        cfg = parse_config(path)
        assert cfg.template_size == 32
        assert cfg.t_d == 20.0
        assert (cfg.alpha, cfg.beta, cfg.tau_g) == (0.4, 0.1, 0.5)
        assert cfg.jump_step == 5
        assert cfg.p_pca == 0.75
        assert cfg.tau_c == 160
        assert cfg.fals_window == 5
        assert cfg.ncc_floor == 0.0

    def test_single_override(self):
        cfg = Config.from_text("tD = 15.0\n")
        assert cfg.t_d == 15.0
        assert cfg.replace(t_d=20.0) == Config()

    def test_alpha_plus_beta_above_one(self):
        with pytest.raises(ConfigError):
            Config.from_text("alpha = 0.9\nbeta = 0.5")

    def test_unparsable_value_reports_line(self):
        with pytest.raises(ConfigError) as info:
            Config.from_text("# comment\nr = 5\npPca = high\n")
        assert info.value.line == 3
        assert "line 3" in str(info.value)

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as info:
            Config.from_text("gamma = 1")
        assert info.value.line == 1

    def test_duplicate_key(self):
        with pytest.raises(ConfigError):
            Config.from_text("r = 5\nr = 6")

    def test_order_insensitive(self):
        lines = ["tauC = 150", "alpha = 0.3", "r = 7", "pPca = 0.7  # stricter"]
        assert Config.from_text("\n".join(lines)) == Config.from_text("\n".join(reversed(lines)))

    def test_even_window_rejected(self):
        with pytest.raises(ConfigError):
            Config(fals_window=4)

    def test_small_template_rejected(self):
        with pytest.raises(ConfigError):
            Config(template_size=7)

    def test_text_round_trip(self):
        cfg = Config(tau_c=150.0, jump_step=7, template_theta_deg=135.0)
        assert Config.from_text(cfg.to_text()) == cfg


class TestDataset:
    def _frame(self, root, index, shape=(12, 16)):
        _write_gray(root / f"{index:06d}.gray.pgm", np.zeros(shape))
        _write_depth_mm(root / f"{index:06d}.depth.pgm", np.full(shape, 2500))

    def test_frames_in_index_order(self, tmp_path):
        for index in (3, 0, 1):
            self._frame(tmp_path, index)
        dataset = Dataset.open(tmp_path)
        assert dataset.indices == [0, 1, 3]
        assert dataset.load_frame(3).index == 3

    def test_missing_directory(self, tmp_path):
        with pytest.raises(InputError):
            Dataset.open(tmp_path / "nowhere")

    def test_missing_depth(self, tmp_path):
        _write_gray(tmp_path / "000000.gray.pgm", np.zeros((4, 4)))
        with pytest.raises(InputError):
            Dataset.open(tmp_path)

    def test_camera_file(self, tmp_path):
        self._frame(tmp_path, 0)
        cam = CameraIntrinsics(40.0, 41.0, 8.0, 6.0, 16, 12)
        (tmp_path / CAMERA_FILE).write_text(cam.to_line())
        assert Dataset.open(tmp_path).load_frame(0).camera == cam

    def test_mask_encoding(self, tmp_path):
        self._frame(tmp_path, 0)
        marker = np.zeros((12, 16), dtype=bool)
        obstacle = np.zeros((12, 16), dtype=bool)
        marker[2, 3] = True
        obstacle[5:7, 5:7] = True
        write_mask(tmp_path / "000000.mask.pgm", marker, obstacle)
        got_marker, got_obstacle = Dataset.open(tmp_path).load_masks(0)
        np.testing.assert_array_equal(got_marker, marker)
        np.testing.assert_array_equal(got_obstacle, obstacle)

    def test_gray_save_is_exact(self, tmp_path):
        data = np.arange(48, dtype=np.uint8).reshape(6, 8)
        save_gray(GrayImage(data), tmp_path / "g.pgm")
        np.testing.assert_array_equal(read_pnm(tmp_path / "g.pgm").pixels, data)
