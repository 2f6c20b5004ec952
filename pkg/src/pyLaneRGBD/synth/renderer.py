"""
Ray-cast renderer for synthetic RGB-D road frames
"""

from dataclasses import dataclass
from typing import Tuple
import numpy as np
from ..core.definitions import (ROAD_TONE, MARKER_TONE, OBSTACLE_TONE, SKY_TONE, FOG_TONE,
                                MAX_RANGE)
from ..core.lane_types import MarkerStyle
from ..core.rasters import GrayImage, DepthImage, Frame
from ..stages.lanefit import LanePlane
from .scene import Box, SceneSpec

MIN_DEPTH = 1e-3  # Noisy depths are kept above this (m)


@dataclass(frozen=True)
class GroundTruth:
    """Noise-free labels derived from the same intersection tests as the frame"""
    marker_mask: np.ndarray     # (h, w) bool
    obstacle_mask: np.ndarray   # (h, w) bool
    plane: LanePlane

    def __post_init__(self):
        if np.any(self.marker_mask & self.obstacle_mask):
            raise ValueError("Marker and obstacle masks overlap")


def _road_hits(directions: np.ndarray, height: float) -> np.ndarray:
    """Ray parameter of the y = height plane, inf where the ray never reaches it"""
    dy = directions[..., 1]
    t = np.full(dy.shape, np.inf)
    down = dy > 0
    t[down] = height / dy[down]
    return t


def _box_hits(directions: np.ndarray, box: Box) -> np.ndarray:
    """Slab test for rays from the origin, inf on a miss"""
    low, high = box.low, box.high
    with np.errstate(divide='ignore', invalid='ignore'):
        t1 = low / directions
        t2 = high / directions
    near = np.fmin(t1, t2)
    far = np.fmax(t1, t2)
    # Axis-parallel rays: inside the slab for all t, or never
    parallel = directions == 0
    inside = (low <= 0) & (0 <= high)
    near = np.where(parallel, np.where(inside, -np.inf, np.inf), near)
    far = np.where(parallel, np.where(inside, np.inf, -np.inf), far)
    t_near = near.max(axis=-1)
    t_far = far.min(axis=-1)
    hit = (t_far >= t_near) & (t_near > 0)
    return np.where(hit, t_near, np.inf)


def _marker_mask(spec: SceneSpec, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    half = spec.marker_width / 2.0
    centre = spec.lane_width / 2.0
    painted = (np.abs(x + centre) <= half) | (np.abs(x - centre) <= half)
    if spec.marker_style is MarkerStyle.DASHED:
        period = spec.dash_length + spec.gap_length
        painted &= np.mod(z, period) < spec.dash_length
    return painted


def _shading(spec: SceneSpec, x: np.ndarray, z: np.ndarray, vehicle_offset: float) -> np.ndarray:
    factor = np.ones(x.shape)
    for band in spec.shadow_bands:
        along = z + vehicle_offset if band.road_fixed else z
        inside = ((along >= band.z_start) & (along < band.z_start + band.length)
                  & (x >= band.x_min) & (x <= band.x_max))
        factor[inside] *= band.factor
    return factor


def render_frame(spec: SceneSpec, vehicle_offset: float = 0.0, heading_jitter: float = 0.0,
                 frame_index: int = 0) -> Tuple[Frame, GroundTruth]:
    """
    Render one gray + depth frame of a straight road

    Every pixel's z = 1 camera ray is rotated into the vehicle's level frame
    and intersected with the road plane y = camera_height and with the
    obstacle boxes. The ray parameter of the nearest hit is the z-depth.

    Args:
        spec: Scene description
        vehicle_offset: Distance travelled along the road (m); scrolls dashes
            and road-fixed shadow bands
        heading_jitter: Heading deviation (radians, positive turns right)
        frame_index: Mixed into the noise seed

    Returns:
        (Frame, GroundTruth); depths beyond the sensor range and sky pixels
        are invalid
    """
    cam = spec.intrinsics
    directions = cam.pixel_rays(unit=False) @ spec.rotation(heading_jitter).T

    t_road = _road_hits(directions, spec.camera_height)
    t_box = np.full(t_road.shape, np.inf)
    for box in spec.obstacles:
        t_box = np.minimum(t_box, _box_hits(directions, box))
    on_box = t_box < t_road
    t_hit = np.where(on_box, t_box, t_road)
    on_road = np.isfinite(t_road) & ~on_box

    with np.errstate(invalid='ignore'):
        x = np.where(on_road, t_road * directions[..., 0], 0.0)
        z = np.where(on_road, t_road * directions[..., 2], 0.0)
    marker = on_road & _marker_mask(spec, x, z + vehicle_offset)

    tone = np.full(t_hit.shape, float(SKY_TONE))
    tone[on_road] = ROAD_TONE
    tone[marker] = MARKER_TONE
    tone[on_box] = OBSTACLE_TONE
    shade = _shading(spec, x, z, vehicle_offset)
    tone[on_road] *= shade[on_road]
    tone *= spec.illumination
    if spec.fog_density > 0:
        weight = 1.0 - np.exp(-spec.fog_density * t_hit)
        tone = tone * (1.0 - weight) + FOG_TONE * weight

    valid = np.isfinite(t_hit) & (t_hit <= MAX_RANGE)
    depth = np.where(valid, t_hit, 0.0)

    rng = np.random.default_rng([spec.seed, frame_index])
    if spec.intensity_sigma > 0:
        tone = tone + rng.normal(0.0, spec.intensity_sigma, tone.shape)
    if spec.depth_sigma > 0:
        noisy = depth + rng.normal(0.0, spec.depth_sigma, depth.shape)
        depth = np.where(valid, np.maximum(noisy, MIN_DEPTH), 0.0)
    gray = np.clip(np.floor(tone + 0.5), 0, 255).astype(np.uint8)

    frame = Frame(GrayImage(gray), DepthImage(depth, valid), cam, frame_index)
    truth = GroundTruth(marker, on_box, spec.road_plane())
    return frame, truth

