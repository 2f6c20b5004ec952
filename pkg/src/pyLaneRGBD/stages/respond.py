"""
Geometric feature map and respond map fusion
"""

from dataclasses import dataclass
import numpy as np
from ..core.config import Config
from ..core.errors import InputError
from ..core.rasters import DepthImage, FloatMap
from .preprocess import NormalMap

# Camera down axis, close to the road normal for a forward-facing camera
O_Y = np.array([0.0, 1.0, 0.0])


@dataclass(frozen=True)
class RespondMaps:
    """Left and right respond maps plus the shared geometric map"""
    left: FloatMap
    right: FloatMap
    g: FloatMap

    def combined(self) -> np.ndarray:
        """Per-pixel maximum of the two respond maps"""
        return np.maximum(self.left.data, self.right.data)


def geom_map(normals: NormalMap, depth: DepthImage, cfg: Config) -> FloatMap:
    """
    Depth-derived lane evidence G

    Near valid pixels (D <= tD) score alpha*|n.Oy| + beta*D/tD; far or
    missing depths score alpha*|n.Oy| + beta*row/height. Invalid normals
    contribute 0 to the alignment term.

    Args:
        normals: FALS normals
        depth: Depth raster
        cfg: Supplies alpha, beta and tD

    Returns:
        FloatMap with values in [0, alpha + beta]
    """
    if normals.shape != depth.shape:
        raise InputError("Normal map and depth differ in size")
    height = depth.height
    alignment = np.minimum(np.abs(normals.normals @ O_Y), 1.0)
    alignment[~normals.valid] = 0.0
    near = depth.valid & (depth.data <= cfg.t_d)
    rows = np.arange(height, dtype=np.float64)[:, np.newaxis] / height
    support = np.where(near, depth.data / cfg.t_d, rows)
    return FloatMap(cfg.alpha * alignment + cfg.beta * support)


def fuse(m: FloatMap, g: FloatMap, tau_g: float) -> FloatMap:
    """
    Respond map R: M where M < tau_g, else M + G

    Args:
        m: Matching map
        g: Geometric map
        tau_g: Matching score needed before G contributes

    Returns:
        FloatMap, not renormalised
    """
    if m.shape != g.shape:
        raise InputError("Matching and geometric maps differ in size")
    return FloatMap(np.where(m.data < tau_g, m.data, m.data + g.data))
