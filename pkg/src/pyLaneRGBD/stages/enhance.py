"""
Template enhancement: peak regions, PCA angle and sliding-box marker tracing

Pixel coordinates in this module are (x, y) = (column, row), angles are
measured from image +x towards image +y.
"""

from dataclasses import dataclass
import logging
import math
from typing import List, Optional, Tuple
import numpy as np
from scipy import ndimage
from ..core.config import Config
from ..core.definitions import ISOTROPY_RATIO, fold_angle
from ..core.errors import DegenerateRegionError
from ..core.lane_types import Side
from ..core.rasters import FloatMap

logger = logging.getLogger(__name__)

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class PeakRegion:
    """8-connected high-response region grown from the global peak"""
    peak: Tuple[int, int]       # (x, y)
    peak_value: float
    points: np.ndarray          # (n, 2) member coordinates (x, y)
    centroid: Tuple[float, float]

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class MarkerChain:
    """Ordered sliding-box centres along one marker"""
    side: Side
    centers: np.ndarray         # (k, 2) subpixel (x, y)
    theta: float                # Stripe angle used for tracing (radians)
    steps: Tuple[int, int] = (0, 0)  # Steps taken along -theta and +theta

    def __len__(self) -> int:
        return len(self.centers)


def select_peak_region(r: FloatMap, threshold: float) -> Optional[PeakRegion]:
    """
    Grow the region around the global maximum

    Args:
        r: Respond map
        threshold: Minimum member value

    Returns:
        PeakRegion, or None when the maximum is below threshold. Ties at the
        maximum go to the smallest row, then column.
    """
    data = r.data
    flat = int(np.argmax(data))
    row, col = divmod(flat, data.shape[1])
    value = float(data[row, col])
    if not value >= threshold:
        return None
    labels, _ = ndimage.label(data >= threshold, structure=EIGHT_CONNECTED)
    rows, cols = np.nonzero(labels == labels[row, col])
    weights = data[rows, cols]
    total = weights.sum()
    centroid = (float((weights * cols).sum() / total), float((weights * rows).sum() / total))
    points = np.column_stack([cols, rows]).astype(np.float64)
    return PeakRegion((col, row), value, points, centroid)


def pca_angle(region: PeakRegion, previous: Optional[float] = None) -> float:
    """
    Orientation of the region's principal axis

    Args:
        region: Region whose (unweighted) member coordinates are analysed
        previous: Angle returned when the spread is isotropic

    Returns:
        Angle in [0, pi)

    Raises:
        DegenerateRegionError: Fewer than 2 distinct points
    """
    points = np.asarray(region.points, dtype=np.float64)
    if len(points) < 2:
        raise DegenerateRegionError(f"PCA needs at least 2 points, got {len(points)}")
    centred = points - points.mean(axis=0)
    cov = centred.T @ centred / (len(points) - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals[1] <= 0:
        raise DegenerateRegionError("All region points coincide")
    if previous is not None and eigvals[1] < ISOTROPY_RATIO * eigvals[0]:
        logger.debug("Isotropic region (eigenvalues %s), keeping angle", eigvals)
        return previous
    major = eigvecs[:, 1]
    return fold_angle(math.atan2(major[1], major[0]))


class _BoxTracer:
    """Sliding box over the above-threshold pixels of one map"""

    def __init__(self, data: np.ndarray, size: int, threshold: float):
        self.data = data
        self.size = size
        self.above = data >= threshold
        self.height, self.width = data.shape

    def bounds(self, origin: np.ndarray) -> Tuple[int, int, int, int]:
        x0 = int(math.floor(origin[0] - self.size / 2.0 + 0.5))
        y0 = int(math.floor(origin[1] - self.size / 2.0 + 0.5))
        return (max(y0, 0), min(y0 + self.size, self.height),
                max(x0, 0), min(x0 + self.size, self.width))

    def inside(self, origin: np.ndarray) -> bool:
        return 0 <= origin[0] <= self.width - 1 and 0 <= origin[1] <= self.height - 1

    def trace(self, start: np.ndarray, direction: np.ndarray, step: float,
              max_steps: int) -> Tuple[List[np.ndarray], int]:
        origin = start
        centers = []
        while len(centers) < max_steps:
            predicted = origin + step * direction
            if not self.inside(predicted):
                break
            y0, y1, x0, x1 = self.bounds(predicted)
            rows, cols = np.nonzero(self.above[y0:y1, x0:x1])
            xs, ys = cols + x0, rows + y0
            # Only pixels strictly ahead of the seed belong to this half-chain
            ahead = (xs - start[0]) * direction[0] + (ys - start[1]) * direction[1] > 0
            if not ahead.any():
                break
            xs, ys = xs[ahead], ys[ahead]
            weights = self.data[ys, xs]
            centroid = np.array([(weights * xs).sum(), (weights * ys).sum()]) / weights.sum()
            if np.sum((predicted - centroid) ** 2) <= step * step:
                following = predicted
            else:
                following = centroid
            if np.dot(following - origin, direction) <= 0:
                break
            origin = following
            centers.append(origin)
        return centers, len(centers)


def max_trace_steps(width: int, height: int, step: int) -> int:
    """Step cap per direction: ceil(image diagonal / r)"""
    return int(math.ceil(math.hypot(width, height) / step))


def trace_marker(r: FloatMap, start: PeakRegion, theta: float, cfg: Config,
                 side: Side = Side.LEFT) -> MarkerChain:
    """
    Slide a template-sized box along a marker in both directions

    Each step predicts O + r(cos theta, sin theta), takes the in-box pixels
    with value >= pPca that lie ahead of the seed along the trace direction
    and keeps the prediction when their weighted centroid lies within r of
    it, otherwise moves to the centroid. A direction stops when the
    prediction leaves the image, the subset is empty or the next origin
    would not advance along the direction.

    Args:
        r: Respond map
        start: Region whose centroid seeds the chain
        theta: Marker angle (radians)
        cfg: Supplies templateSize, r and pPca
        side: Side recorded on the chain

    Returns:
        MarkerChain ordered from the -theta end to the +theta end
    """
    tracer = _BoxTracer(r.data, cfg.template_size, cfg.p_pca)
    origin = np.array(start.centroid, dtype=np.float64)
    direction = np.array([math.cos(theta), math.sin(theta)])
    cap = max_trace_steps(r.width, r.height, cfg.jump_step)
    backward, back_steps = tracer.trace(origin, -direction, cfg.jump_step, cap)
    forward, fwd_steps = tracer.trace(origin, direction, cfg.jump_step, cap)
    centers = np.array(backward[::-1] + [origin] + forward, dtype=np.float64).reshape(-1, 2)
    return MarkerChain(side, centers, theta, (back_steps, fwd_steps))
