"""
Detection overlays: gray frames with chain centres and peaks marked
"""

from pathlib import Path
from typing import Union
import numpy as np
from ..core.detector import DetectionResult, peak_pixels
from ..core.pnm import save_gray
from ..core.rasters import GrayImage

CROSS_ARM = 3      # Pixels either side of the centre
CROSS_VALUE = 255
PEAK_ARM = 6


def draw_crosses(image: np.ndarray, points: np.ndarray, arm: int = CROSS_ARM,
                 value: int = CROSS_VALUE) -> None:
    """Draw '+' marks in place at (x, y) points, clipped to the image"""
    height, width = image.shape
    for x, y in np.asarray(points, dtype=np.float64).reshape(-1, 2):
        col = int(np.floor(x + 0.5))
        row = int(np.floor(y + 0.5))
        if not (0 <= row < height and 0 <= col < width):
            continue
        image[row, max(col - arm, 0):min(col + arm + 1, width)] = value
        image[max(row - arm, 0):min(row + arm + 1, height), col] = value


def render_overlay(gray: GrayImage, result: DetectionResult) -> GrayImage:
    """
    Copy of the gray frame with crosses at every chain centre and larger ones at the peaks

    Args:
        gray: Frame intensities
        result: Detection of the same frame

    Returns:
        New GrayImage
    """
    canvas = np.array(gray.data, dtype=np.uint8)
    for chain in (result.left_chain, result.right_chain):
        if chain is not None:
            draw_crosses(canvas, chain.centers)
    draw_crosses(canvas, peak_pixels(result), arm=PEAK_ARM)
    return GrayImage(canvas)


def save_overlay(gray: GrayImage, result: DetectionResult, path: Union[str, Path]) -> None:
    save_gray(render_overlay(gray, result), path)
