"""
Synthetic road scene description and scenario presets
"""

from dataclasses import dataclass, field, fields, replace
import math
from typing import Dict, List, Tuple
import numpy as np
from ..core.camera import CameraIntrinsics
from ..core.definitions import DEFAULT_WIDTH, DEFAULT_HEIGHT
from ..core.lane_types import MarkerStyle
from ..stages.lanefit import LanePlane


@dataclass(frozen=True)
class Box:
    """Axis-aligned obstacle in the vehicle's level frame (x right, y down, z forward)"""
    position: Tuple[float, float, float]  # Centre (m)
    size: Tuple[float, float, float]      # Edge lengths (m)

    def __post_init__(self):
        if any(s <= 0 for s in self.size):
            raise ValueError(f"Box sizes must be positive, got {self.size}")

    @classmethod
    def on_road(cls, x: float, z: float, edge: float, camera_height: float) -> 'Box':
        """Cube of the given edge resting on the road"""
        return cls((x, camera_height - edge / 2.0, z), (edge, edge, edge))

    @property
    def low(self) -> np.ndarray:
        return np.array(self.position) - np.array(self.size) / 2.0

    @property
    def high(self) -> np.ndarray:
        return np.array(self.position) + np.array(self.size) / 2.0


@dataclass(frozen=True)
class ShadowBand:
    """Darkened stretch of road (overpass or vehicle shadow)"""
    z_start: float              # Forward start (m)
    length: float               # Forward extent (m)
    factor: float               # Intensity multiplier
    x_min: float = -math.inf    # Lateral limits (m)
    x_max: float = math.inf
    road_fixed: bool = True     # Scrolls with the vehicle's advance when True

    def __post_init__(self):
        if self.length <= 0 or not 0 <= self.factor <= 1:
            raise ValueError("Shadow band needs positive length and factor in [0, 1]")


@dataclass(frozen=True)
class SceneSpec:
    """Straight road seen by a pitched pinhole camera"""
    camera_height: float = 1.5                    # Metres above the road
    camera_pitch: float = math.radians(10.0)      # Down-positive (radians)
    lane_width: float = 3.6
    marker_width: float = 0.15
    marker_style: MarkerStyle = MarkerStyle.SOLID
    dash_length: float = 3.0
    gap_length: float = 6.0
    obstacles: Tuple[Box, ...] = ()
    intensity_sigma: float = 0.0                  # Gray levels
    depth_sigma: float = 0.0                      # Metres
    fog_density: float = 0.0
    seed: int = 0
    intrinsics: CameraIntrinsics = field(
        default_factory=lambda: CameraIntrinsics.default(DEFAULT_WIDTH, DEFAULT_HEIGHT))
    illumination: float = 1.0                     # Global intensity gain
    shadow_bands: Tuple[ShadowBand, ...] = ()
    speed: float = 0.5                            # Advance per frame (m)
    heading_sigma: float = 0.005                  # Per-frame heading jitter (radians)

    def __post_init__(self):
        if self.camera_height <= 0:
            raise ValueError(f"Camera height must be positive, got {self.camera_height}")
        if not self.lane_width > self.marker_width > 0:
            raise ValueError("Need lane_width > marker_width > 0")
        if self.marker_style is MarkerStyle.DASHED and (self.dash_length <= 0 or self.gap_length <= 0):
            raise ValueError("Dashed markers need positive dash and gap lengths")
        if min(self.intensity_sigma, self.depth_sigma, self.fog_density, self.heading_sigma) < 0:
            raise ValueError("Noise, fog and jitter parameters must be non-negative")
        if self.illumination <= 0:
            raise ValueError("Illumination gain must be positive")

    def replace(self, **changes) -> 'SceneSpec':
        return replace(self, **changes)

    def rotation(self, heading: float = 0.0) -> np.ndarray:
        """Camera-to-level-frame rotation: pitch about x, then heading about y"""
        cp, sp = math.cos(self.camera_pitch), math.sin(self.camera_pitch)
        ch, sh = math.cos(heading), math.sin(heading)
        pitch = np.array([[1.0, 0.0, 0.0], [0.0, cp, sp], [0.0, -sp, cp]])
        yaw = np.array([[ch, 0.0, sh], [0.0, 1.0, 0.0], [-sh, 0.0, ch]])
        return yaw @ pitch

    def road_plane(self) -> LanePlane:
        """Analytic road plane in camera coordinates"""
        rot = self.rotation()
        normal = rot.T @ np.array([0.0, 1.0, 0.0])
        point = rot.T @ np.array([0.0, self.camera_height, 0.0])
        return LanePlane(normal, point)

    def echo(self) -> List[str]:
        """`spec.<field> = value` lines for manifests"""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, MarkerStyle):
                value = value.name.lower()
            elif isinstance(value, CameraIntrinsics):
                value = value.to_line()
            lines.append(f"spec.{f.name} = {value}")
        return lines


def _obstacle_spec(base: SceneSpec) -> SceneSpec:
    box = Box.on_road(0.0, 14.0, 1.5, base.camera_height)
    return base.replace(obstacles=(box,))


def _shadow_spec(base: SceneSpec) -> SceneSpec:
    box = Box.on_road(0.0, 14.0, 1.5, base.camera_height)
    shadow = ShadowBand(14.75, 3.0, 0.5, x_min=-1.2, x_max=1.2, road_fixed=False)
    return base.replace(obstacles=(box,), shadow_bands=(shadow,))


def _overpass_spec(base: SceneSpec) -> SceneSpec:
    bands = tuple(ShadowBand(30.0 * k + 12.0, 6.0, 0.55) for k in range(8))
    return base.replace(shadow_bands=bands)


SCENARIOS: Dict[str, callable] = {
    'summer': lambda s: s,
    'cloudy': lambda s: s.replace(illumination=0.85, intensity_sigma=3.0),
    'fog': lambda s: s.replace(fog_density=0.08, intensity_sigma=8.0, depth_sigma=0.01),
    'overpass': _overpass_spec,
    'shadow': _shadow_spec,
    'dashed': lambda s: s.replace(marker_style=MarkerStyle.DASHED),
    'obstacle': _obstacle_spec,
}


def scenario(name: str, **changes) -> SceneSpec:
    """
    Preset scene for a named road condition

    Args:
        name: One of SCENARIOS
        **changes: SceneSpec fields overriding the preset

    Raises:
        ValueError: Unknown scenario
    """
    if name not in SCENARIOS:
        raise ValueError(f"Unknown scenario {name!r}, expected one of {sorted(SCENARIOS)}")
    return SCENARIOS[name](SceneSpec()).replace(**changes)
