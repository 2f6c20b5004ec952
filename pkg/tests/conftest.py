"""Shared fixtures: small cameras, analytic planar depth and tiny rendered datasets."""

import math

import numpy as np
import pytest

from pyLaneRGBD.core.camera import CameraIntrinsics
from pyLaneRGBD.core.config import Config
from pyLaneRGBD.core.rasters import DepthImage
from pyLaneRGBD.synth.dataset import make_dataset
from pyLaneRGBD.synth.scene import SceneSpec


def plane_depth(cam: CameraIntrinsics, normal, offset: float) -> np.ndarray:
    """z-depth of the plane normal . p = offset behind every pixel (inf where unseen)."""
    rays = cam.pixel_rays(unit=False)
    denom = rays @ np.asarray(normal, dtype=np.float64)
    with np.errstate(divide='ignore'):
        depth = offset / denom
    depth[~(depth > 0)] = np.inf
    return depth


def road_normal(pitch: float) -> np.ndarray:
    """Camera-frame normal of the road under a camera pitched down by `pitch`."""
    return np.array([0.0, math.cos(pitch), math.sin(pitch)])


def analytic_road_depth(spec: SceneSpec, col: float, row: float) -> float:
    """Closed-form z-depth of the road behind one pixel with zero heading, inf above the horizon."""
    cam = spec.intrinsics
    v = (row - cam.cy) / cam.fy
    down = math.sin(spec.camera_pitch) + math.cos(spec.camera_pitch) * v
    if down <= 0:
        return math.inf
    return spec.camera_height / down


@pytest.fixture
def small_camera():
    return CameraIntrinsics(fx=100.0, fy=100.0, cx=32.0, cy=24.0, width=64, height=48)


@pytest.fixture
def wide_camera():
    """Few wide pixels, so a 5x5 window spans a large patch of a nearby plane."""
    return CameraIntrinsics(fx=20.0, fy=20.0, cx=20.0, cy=15.0, width=40, height=30)


@pytest.fixture
def ground_depth(small_camera):
    """Road 1.5 m below a camera pitched 10 degrees down, as seen by small_camera."""
    pitch = math.radians(10.0)
    depth = plane_depth(small_camera, road_normal(pitch), 1.5)
    valid = np.isfinite(depth)
    return DepthImage(np.where(valid, depth, 0.0), valid)


@pytest.fixture
def half_spec():
    """Default road at half resolution (320x240, f = 250)."""
    return SceneSpec(intrinsics=CameraIntrinsics.default(320, 240), heading_sigma=0.0)


@pytest.fixture
def half_config():
    """Default parameters with the template scaled to the half-resolution camera."""
    return Config(template_size=16)


@pytest.fixture(scope="module")
def tiny_dataset(tmp_path_factory):
    """Four half-resolution frames of the default clean road."""
    spec = SceneSpec(intrinsics=CameraIntrinsics.default(320, 240))
    out = tmp_path_factory.mktemp("tiny")
    make_dataset(spec, 4, out)
    return out
