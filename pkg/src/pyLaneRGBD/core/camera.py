"""
Pinhole camera model
"""

from dataclasses import dataclass
import numpy as np
from .definitions import default_focal


@dataclass(frozen=True)
class CameraIntrinsics:
    """Ideal pinhole intrinsics shared by the gray and depth rasters"""
    fx: float      # Focal lengths (pixels)
    fy: float
    cx: float      # Principal point (pixels)
    cy: float
    width: int     # Raster size (pixels)
    height: int

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise ValueError(f"Focal lengths must be positive, got fx={self.fx}, fy={self.fy}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"Raster size must be positive, got {self.width}x{self.height}")
        if not 0 <= self.cx < self.width:
            raise ValueError(f"cx={self.cx} outside [0, {self.width})")
        if not 0 <= self.cy < self.height:
            raise ValueError(f"cy={self.cy} outside [0, {self.height})")

    @classmethod
    def default(cls, width: int, height: int) -> 'CameraIntrinsics':
        """Centred camera with the default field of view for a raster size"""
        f = default_focal(width)
        return cls(fx=f, fy=f, cx=width / 2.0, cy=height / 2.0, width=width, height=height)

    @classmethod
    def from_line(cls, line: str) -> 'CameraIntrinsics':
        """Parse a `fx fy cx cy width height` line"""
        parts = line.split()
        if len(parts) != 6:
            raise ValueError(f"Camera line needs 6 fields, got {len(parts)}")
        fx, fy, cx, cy = (float(p) for p in parts[:4])
        return cls(fx, fy, cx, cy, int(parts[4]), int(parts[5]))

    def to_line(self) -> str:
        return f"{self.fx!r} {self.fy!r} {self.cx!r} {self.cy!r} {self.width} {self.height}"

    @property
    def shape(self) -> tuple:
        """Raster shape as (height, width)"""
        return (self.height, self.width)

    def pixel_rays(self, unit: bool = True) -> np.ndarray:
        """
        Viewing ray of every pixel

        Args:
            unit: Normalise rays to unit length; otherwise rays have z = 1

        Returns:
            Array of shape (height, width, 3)
        """
        cols = (np.arange(self.width, dtype=np.float64) - self.cx) / self.fx
        rows = (np.arange(self.height, dtype=np.float64) - self.cy) / self.fy
        rays = np.empty((self.height, self.width, 3))
        rays[..., 0] = cols[np.newaxis, :]
        rays[..., 1] = rows[:, np.newaxis]
        rays[..., 2] = 1.0
        if unit:
            rays /= np.linalg.norm(rays, axis=2, keepdims=True)
        return rays

    def project(self, points: np.ndarray) -> np.ndarray:
        """
        Project camera-frame points to subpixel (column, row) coordinates

        Args:
            points: Array (..., 3) with z > 0

        Returns:
            Array (..., 2) of (i, j) pixel coordinates
        """
        points = np.asarray(points, dtype=np.float64)
        z = points[..., 2]
        i = points[..., 0] / z * self.fx + self.cx
        j = points[..., 1] / z * self.fy + self.cy
        return np.stack([i, j], axis=-1)
