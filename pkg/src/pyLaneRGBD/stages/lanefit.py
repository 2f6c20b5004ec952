"""
Lane plane fitting from three detected marker points
"""

from dataclasses import dataclass
import math
from typing import Sequence, Tuple
import numpy as np
from ..core.definitions import COLLINEAR_EPS, LOOKUP_RADIUS
from ..core.errors import DegeneratePlaneError, DepthGapError, InputError, FormatError
from .preprocess import PointGrid

Pixel = Tuple[float, float]  # (x, y) = (column, row)


@dataclass(frozen=True)
class LanePlane:
    """Road plane: unit normal (camera-down positive) and a point on it"""
    normal: np.ndarray                      # (3,)
    point: np.ndarray                       # (3,) metres
    source_pixels: Tuple[Pixel, ...] = ()   # v_a1, v_b, v_a2 pixels

    def to_line(self) -> str:
        """`nx ny nz px py pz` text form"""
        return " ".join(f"{v:.9f}" for v in (*self.normal, *self.point))

    @classmethod
    def from_line(cls, line: str) -> 'LanePlane':
        parts = line.split()
        if len(parts) != 6:
            raise FormatError(f"Plane line needs 6 numbers, got {len(parts)}")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise FormatError(f"Non-numeric plane line {line!r}") from None
        normal = np.array(values[:3])
        length = np.linalg.norm(normal)
        if not length > 0:
            raise FormatError("Plane normal has zero length")
        return cls(normal / length, np.array(values[3:]))

    def angle_to(self, other: 'LanePlane') -> float:
        """Angle between the two normals in degrees"""
        cosine = float(np.clip(abs(self.normal @ other.normal), -1.0, 1.0))
        return math.degrees(math.acos(cosine))

    def distance(self, p: np.ndarray) -> float:
        """Signed distance of a point from the plane"""
        return float(self.normal @ (np.asarray(p) - self.point))


def lookup_3d(grid: PointGrid, pixel: Pixel) -> np.ndarray:
    """
    3D point behind a subpixel location

    Searches the 7x7 neighbourhood of the rounded pixel for the nearest
    valid cell (Euclidean pixel distance, ties by smaller row then column).

    Args:
        grid: Point grid
        pixel: (x, y) inside the image

    Returns:
        Point (3,) in metres

    Raises:
        InputError: Pixel outside the image
        DepthGapError: No valid depth in the neighbourhood
    """
    height, width = grid.shape
    x, y = pixel
    if not (-0.5 <= x < width - 0.5 and -0.5 <= y < height - 0.5):
        raise InputError(f"Pixel ({x}, {y}) outside {width}x{height} image")
    col = int(math.floor(x + 0.5))
    row = int(math.floor(y + 0.5))
    best = None
    for dr in range(-LOOKUP_RADIUS, LOOKUP_RADIUS + 1):
        for dc in range(-LOOKUP_RADIUS, LOOKUP_RADIUS + 1):
            r, c = row + dr, col + dc
            if 0 <= r < height and 0 <= c < width and grid.valid[r, c]:
                key = (dr * dr + dc * dc, r, c)
                if best is None or key < best:
                    best = key
    if best is None:
        raise DepthGapError(f"No valid depth within 7x7 of pixel ({x:.1f}, {y:.1f})")
    _, r, c = best
    return grid.points[r, c].copy()


def plane_from_points(v_a1: np.ndarray, v_b: np.ndarray, v_a2: np.ndarray) -> np.ndarray:
    """
    Unit normal of (v_b - v_a1) x (v_a2 - v_a1), flipped to positive y

    Raises:
        DegeneratePlaneError: Points collinear
    """
    v_a1, v_b, v_a2 = (np.asarray(v, dtype=np.float64) for v in (v_a1, v_b, v_a2))
    cross = np.cross(v_b - v_a1, v_a2 - v_a1)
    length = np.linalg.norm(cross)
    if not length > COLLINEAR_EPS:
        raise DegeneratePlaneError(f"Plane points are collinear (|cross| = {length:.3g})")
    normal = cross / length
    if normal[1] < 0:
        normal = -normal
    return normal


def fit_plane(grid: PointGrid, left_peak: Pixel, right_peak: Pixel, right_far: Pixel) -> LanePlane:
    """
    Lane plane through the left peak, right peak and furthest right centre

    Args:
        grid: Point grid of the frame
        left_peak: Peak pixel of the left respond map (v_a1)
        right_peak: Peak pixel of the right respond map (v_b)
        right_far: Furthest right-chain centre (v_a2)

    Returns:
        LanePlane anchored at v_a1

    Raises:
        DegeneratePlaneError: Pixels not distinct or points collinear
        DepthGapError: A pixel has no valid depth nearby
    """
    pixels = (tuple(left_peak), tuple(right_peak), tuple(right_far))
    if len(set(pixels)) < 3:
        raise DegeneratePlaneError(f"Plane pixels are not distinct: {pixels}")
    v_a1, v_b, v_a2 = (lookup_3d(grid, p) for p in pixels)
    normal = plane_from_points(v_a1, v_b, v_a2)
    return LanePlane(normal, v_a1, pixels)


def furthest_center(grid: PointGrid, centers: Sequence[Pixel]) -> Pixel:
    """
    Chain centre whose 3D point lies furthest along the optical axis

    Centres without nearby depth are ignored; ties keep the earlier centre.

    Raises:
        DepthGapError: No centre has depth
    """
    best = None
    best_z = -math.inf
    for center in centers:
        try:
            z = lookup_3d(grid, center)[2]
        except DepthGapError:
            continue
        if z > best_z:
            best, best_z = (float(center[0]), float(center[1])), z
    if best is None:
        raise DepthGapError("No chain centre has valid depth")
    return best
