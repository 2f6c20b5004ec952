"""
Image pre-processing: half-binary intensity, point grid and FALS normals
"""

from dataclasses import dataclass
import numpy as np
from scipy import ndimage
from ..core.camera import CameraIntrinsics
from ..core.definitions import MIN_FALS_SAMPLES, SINGULAR_COND
from ..core.errors import InputError, ParameterError
from ..core.lane_types import RangeMode
from ..core.rasters import GrayImage, DepthImage


@dataclass(frozen=True)
class PointGrid:
    """Per-pixel 3D points in camera coordinates (x right, y down, z forward)"""
    points: np.ndarray  # (h, w, 3) metres
    valid: np.ndarray   # (h, w) bool

    @property
    def shape(self) -> tuple:
        return self.valid.shape

    def ranges(self) -> np.ndarray:
        """Euclidean distance of every point from the camera"""
        return np.linalg.norm(self.points, axis=2)


@dataclass(frozen=True)
class NormalMap:
    """Per-pixel unit surface normals, oriented towards the camera"""
    normals: np.ndarray  # (h, w, 3)
    valid: np.ndarray    # (h, w) bool

    @property
    def shape(self) -> tuple:
        return self.valid.shape


@dataclass(frozen=True)
class FalsPrecomp:
    """Camera-only part of FALS: rays and windowed inverse matrices"""
    camera: CameraIntrinsics
    window: int
    rays: np.ndarray     # (h, w, 3) unit rays, or z = 1 rays in RangeMode.Z
    m_inv: np.ndarray    # (h, w, 3, 3), zero where unusable
    usable: np.ndarray   # (h, w) bool, False where the clipped M is singular
    range_mode: RangeMode = RangeMode.RANGE


def box_sum(values: np.ndarray, window: int) -> np.ndarray:
    """
    Sum over a centred window, clipped at the raster border

    Args:
        values: Array (h, w) or (h, w, ...) summed over the first two axes
        window: Odd window edge

    Returns:
        Array of the same shape
    """
    kernel = np.ones((window, window))
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 2:
        return ndimage.correlate(values, kernel, mode='constant', cval=0.0)
    flat = values.reshape(values.shape[:2] + (-1,))
    out = np.empty_like(flat)
    for k in range(flat.shape[2]):
        out[..., k] = ndimage.correlate(flat[..., k], kernel, mode='constant', cval=0.0)
    return out.reshape(values.shape)


def to_half_binary(gray: GrayImage, tau_c: float) -> GrayImage:
    """
    Zero every pixel darker than tau_c, keep the rest unchanged

    Args:
        gray: Input intensities
        tau_c: Threshold; the comparison is strict less-than

    Returns:
        Half-binary image
    """
    data = gray.data
    return GrayImage(np.where(data < tau_c, 0, data).astype(np.uint8))


def backproject(depth: DepthImage, cam: CameraIntrinsics) -> PointGrid:
    """
    Lift every valid depth pixel to a 3D point

    Args:
        depth: Depth raster in metres
        cam: Intrinsics of the same raster size

    Returns:
        PointGrid; z equals the source depth exactly

    Raises:
        InputError: Depth raster and intrinsics differ in size
    """
    if depth.shape != cam.shape:
        raise InputError(f"Depth {depth.width}x{depth.height} does not match camera "
                         f"{cam.width}x{cam.height}")
    d = depth.data
    cols = (np.arange(cam.width, dtype=np.float64) - cam.cx) / cam.fx
    rows = (np.arange(cam.height, dtype=np.float64) - cam.cy) / cam.fy
    points = np.empty(d.shape + (3,))
    points[..., 0] = cols[np.newaxis, :] * d
    points[..., 1] = rows[:, np.newaxis] * d
    points[..., 2] = d
    points[~depth.valid] = 0.0
    return PointGrid(points, depth.valid.copy())


def fals_precompute(cam: CameraIntrinsics, window: int,
                    range_mode: RangeMode = RangeMode.RANGE) -> FalsPrecomp:
    """
    Pre-compute per-pixel inverse FALS matrices from the intrinsics alone

    Args:
        cam: Camera intrinsics
        window: Odd window edge (>= 3)
        range_mode: RANGE uses unit rays; Z uses z = 1 rays paired with z-depth

    Returns:
        FalsPrecomp shared read-only by every frame of the camera

    Raises:
        ParameterError: Window even or smaller than 3
    """
    if window < 3 or window % 2 == 0:
        raise ParameterError(f"FALS window must be odd and >= 3, got {window}")
    rays = cam.pixel_rays(unit=range_mode is RangeMode.RANGE)
    outer = rays[..., :, np.newaxis] * rays[..., np.newaxis, :]
    m = box_sum(outer, window)

    cond = np.linalg.cond(m)
    usable = np.isfinite(cond) & (cond <= SINGULAR_COND)
    m[~usable] = np.eye(3)
    m_inv = np.linalg.inv(m)
    m_inv[~usable] = 0.0
    return FalsPrecomp(cam, window, rays, m_inv, usable, range_mode)


def fals_normals(grid: PointGrid, depth: DepthImage, pre: FalsPrecomp) -> NormalMap:
    """
    Estimate unit surface normals with FALS

    For every pixel, b = sum(v_i / r_i) over the valid window pixels and the
    raw normal is M^-1 b, normalised and flipped to face the camera.

    Args:
        grid: Backprojected points
        depth: Depth raster the grid came from
        pre: Precompute for the same camera

    Returns:
        NormalMap; pixels with fewer than 3 valid window depths or a
        singular M are invalid

    Raises:
        InputError: Sizes differ
    """
    if grid.shape != depth.shape or grid.shape != pre.camera.shape:
        raise InputError("Point grid, depth and FALS precompute differ in size")
    valid = grid.valid
    if pre.range_mode is RangeMode.RANGE:
        r = grid.ranges()
    else:
        r = depth.data
    inv_r = np.zeros(valid.shape)
    np.divide(1.0, r, out=inv_r, where=valid)

    b = box_sum(pre.rays * inv_r[..., np.newaxis], pre.window)
    count = box_sum(valid.astype(np.float64), pre.window)
    raw = np.einsum('hwij,hwj->hwi', pre.m_inv, b)
    norm = np.linalg.norm(raw, axis=2)

    ok = pre.usable & (count >= MIN_FALS_SAMPLES - 0.5) & (norm > 0)
    normals = np.zeros_like(raw)
    normals[ok] = raw[ok] / norm[ok, np.newaxis]
    facing = np.einsum('hwi,hwi->hw', normals, pre.rays)
    normals[facing > 0] *= -1.0
    return NormalMap(normals, ok)
