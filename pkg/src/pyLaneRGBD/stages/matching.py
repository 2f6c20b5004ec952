"""
Slanted stripe templates and NCC matching
"""

from dataclasses import dataclass
import math
from typing import List, Optional, Sequence, Tuple
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from ..core.errors import InputError, ParameterError
from ..core.lane_types import Side
from ..core.rasters import GrayImage, FloatMap

STRIPE_VALUE = 255


@dataclass(frozen=True)
class Template:
    """Square bright-stripe template on a dark background"""
    size: int
    pixels: np.ndarray   # (size, size) uint8, values 0 or 255
    theta: float         # Nominal angle (radians); the right side mirrors it
    side: Side
    stripe_width: int

    @property
    def stripe_angle(self) -> float:
        """Actual stripe angle from the image +x axis"""
        return self.theta if self.side is Side.LEFT else math.pi - self.theta


def _stripe_mask(size: int, theta: float, stripe_width: int) -> np.ndarray:
    centre = (size - 1) / 2.0
    offsets = np.arange(size, dtype=np.float64) - centre
    dx = offsets[np.newaxis, :]
    dy = offsets[:, np.newaxis]
    distance = np.abs(-math.sin(theta) * dx + math.cos(theta) * dy)
    return distance <= stripe_width / 2.0


def make_template(size: int, theta: float, stripe_width: Optional[int] = None,
                  side: Side = Side.LEFT) -> Template:
    """
    Build a left or right lane template

    Args:
        size: Template edge in pixels
        theta: Nominal stripe angle in (0, pi), measured from image +x
            towards image +y (down); the right template is the horizontal
            mirror, i.e. stripe angle pi - theta
        stripe_width: Band width in pixels, default size // 4
        side: Which marker the template models

    Returns:
        Template whose pixels within stripe_width / 2 of the centre line are 255

    Raises:
        ParameterError: Width or angle out of range
    """
    if stripe_width is None:
        stripe_width = max(1, size // 4)
    if not 0 < stripe_width < size:
        raise ParameterError(f"Stripe width must lie in (0, {size}), got {stripe_width}")
    if not 0 < theta < math.pi:
        raise ParameterError(f"Template angle must lie in (0, pi), got {theta}")
    mask = _stripe_mask(size, theta, stripe_width)
    if side is Side.RIGHT:
        mask = np.fliplr(mask)
    pixels = np.where(mask, STRIPE_VALUE, 0).astype(np.uint8)
    pixels.setflags(write=False)
    return Template(size, pixels, theta, side, stripe_width)


def rotate_template(t: Template, new_theta: float) -> Template:
    """Regenerate a template at a new nominal angle, keeping size, width and side"""
    return make_template(t.size, new_theta, t.stripe_width, t.side)


def _row_runs(pixels: np.ndarray) -> Optional[Tuple[int, List[Tuple[int, int, int]]]]:
    """
    Decompose a two-level template into one run per row

    Returns:
        (level, [(row, start, stop), ...]) or None when some row is not a
        single contiguous run of one non-zero level
    """
    levels = np.unique(pixels)
    levels = levels[levels != 0]
    if len(levels) > 1:
        return None
    level = int(levels[0]) if len(levels) else 0
    runs = []
    for row, values in enumerate(pixels):
        cols = np.flatnonzero(values)
        if len(cols) == 0:
            continue
        if cols[-1] - cols[0] + 1 != len(cols):
            return None
        runs.append((row, int(cols[0]), int(cols[-1]) + 1))
    return level, runs


def _window_sums(image: np.ndarray, size: int) -> np.ndarray:
    integral = np.zeros((image.shape[0] + 1, image.shape[1] + 1), dtype=np.int64)
    integral[1:, 1:] = image.cumsum(axis=0).cumsum(axis=1)
    return (integral[size:, size:] - integral[:-size, size:]
            - integral[size:, :-size] + integral[:-size, :-size])


@dataclass(frozen=True)
class PatchStats:
    """Template-independent sums of one image for a given patch size"""
    size: int
    data: np.ndarray        # (h, w) int64 image
    sum_p: np.ndarray       # (h - size + 1, w - size + 1) patch sums
    sum_pp: np.ndarray      # Patch sums of squares
    row_prefix: np.ndarray  # (h, w + 1) int32 running row sums, leading zero column

    @property
    def out_shape(self) -> Tuple[int, int]:
        return self.sum_p.shape


def patch_stats(image: GrayImage, size: int) -> PatchStats:
    """
    Compute the patch sums every template of one size shares

    Args:
        image: Gray image
        size: Template edge

    Returns:
        PatchStats reusable by ncc_match for any template of that size

    Raises:
        InputError: Patch larger than the image
    """
    if size > image.height or size > image.width:
        raise InputError(f"Template {size}x{size} larger than image {image.width}x{image.height}")
    data = image.data.astype(np.int64)
    prefix = np.zeros((image.height, image.width + 1), dtype=np.int32)
    np.cumsum(image.data, axis=1, dtype=np.int32, out=prefix[:, 1:])
    return PatchStats(size, data, _window_sums(data, size), _window_sums(data * data, size),
                      prefix)


def _cross_sums(stats: PatchStats, pixels: np.ndarray) -> np.ndarray:
    """Sum of template * patch for every placement, in exact integers"""
    size = stats.size
    out_h, out_w = stats.out_shape
    decomposed = _row_runs(pixels)
    if decomposed is None:
        windows = sliding_window_view(stats.data, (size, size))
        return np.einsum('ijkl,kl->ij', windows, pixels.astype(np.int64))
    level, runs = decomposed
    prefix = stats.row_prefix
    # Horizontal run sums, one raster per distinct run length
    run_sums = {length: prefix[:, length:] - prefix[:, :-length]
                for length in {stop - start for _, start, stop in runs}}
    total = np.zeros((out_h, out_w), dtype=np.int32)
    for row, start, stop in runs:
        total += run_sums[stop - start][row:row + out_h, start:start + out_w]
    return total.astype(np.int64) * level


def ncc_match(image: GrayImage, t: Template, floor: float = 0.0,
              stats: Optional[PatchStats] = None) -> FloatMap:
    """
    Zero-mean NCC of a template at every placement

    The score of each placement is stored at the patch centre
    (top-left + size // 2); placements where the template does not fit and
    zero-variance patches score 0. Other scores are max(ncc, floor).

    Args:
        image: Gray (usually half-binary) image
        t: Template
        floor: Lower clamp, 0 keeps the map in [0, 1]
        stats: Patch sums of `image` for t.size, computed when omitted

    Returns:
        FloatMap of the image size

    Raises:
        InputError: Template larger than the image, or stats of another size
    """
    size = t.size
    if stats is None:
        stats = patch_stats(image, size)
    elif stats.size != size or stats.data.shape != image.shape:
        raise InputError(f"Patch sums for size {stats.size} do not fit a {size}x{size} "
                         f"template on this image")
    pixels = t.pixels.astype(np.int64)
    n = size * size

    sum_p = stats.sum_p
    sum_tp = _cross_sums(stats, t.pixels)
    sum_t = int(pixels.sum())
    var_t = n * int((pixels * pixels).sum()) - sum_t * sum_t
    var_p = n * stats.sum_pp - sum_p * sum_p
    numerator = n * sum_tp - sum_t * sum_p

    scores = np.zeros(sum_p.shape)
    ok = var_p > 0
    if var_t > 0:
        denom = math.sqrt(var_t) * np.sqrt(var_p[ok].astype(np.float64))
        scores[ok] = np.maximum(np.clip(numerator[ok] / denom, -1.0, 1.0), floor)

    out = np.zeros(image.shape)
    c = size // 2
    out[c:c + scores.shape[0], c:c + scores.shape[1]] = scores
    return FloatMap(out)


def candidate_angles(step_deg: float) -> List[float]:
    """Nominal left angles in (90, 180) degrees every step_deg, in radians"""
    if step_deg <= 0:
        return []
    count = int(math.ceil(180.0 / step_deg))
    return [math.radians(k * step_deg) for k in range(1, count)
            if 90.0 < k * step_deg < 180.0]


def sweep_templates(image: GrayImage, base: Template, angles: Sequence[float],
                    floor: float = 0.0,
                    stats: Optional[PatchStats] = None) -> Tuple[Template, FloatMap]:
    """
    Match a set of nominal angles and keep the strongest peak

    Args:
        image: Half-binary image
        base: Template giving size, width and side
        angles: Nominal angles to try (radians); base.theta is always tried first
        floor: NCC floor
        stats: Patch sums of `image`, computed once here when omitted

    Returns:
        (best template, its matching map); ties keep the earlier angle
    """
    if stats is None:
        stats = patch_stats(image, base.size)
    best_template = base
    best_map = ncc_match(image, base, floor, stats)
    best_peak = float(best_map.data.max())
    for theta in angles:
        if theta == base.theta:
            continue
        template = rotate_template(base, theta)
        fmap = ncc_match(image, template, floor, stats)
        peak = float(fmap.data.max())
        if peak > best_peak:
            best_template, best_map, best_peak = template, fmap, peak
    return best_template, best_map
