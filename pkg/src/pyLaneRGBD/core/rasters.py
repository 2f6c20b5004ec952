"""
Raster containers for the pipeline
"""

from dataclasses import dataclass
from typing import Optional
import numpy as np
from .camera import CameraIntrinsics
from .errors import InputError


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class GrayImage:
    """Row-major 8-bit intensity raster"""
    data: np.ndarray  # (height, width) uint8

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 2:
            raise InputError(f"Gray image must be 2D, got shape {data.shape}")
        if data.dtype != np.uint8:
            if data.size and (data.min() < 0 or data.max() > 255):
                raise InputError("Gray values must lie in [0, 255]")
            data = data.astype(np.uint8)
        object.__setattr__(self, 'data', _frozen(data.copy()))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple:
        return self.data.shape


@dataclass(frozen=True)
class DepthImage:
    """Row-major depth raster in metres with a validity mask"""
    data: np.ndarray                     # (height, width) float64 metres
    valid: Optional[np.ndarray] = None   # (height, width) bool; None derives it from data > 0

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise InputError(f"Depth image must be 2D, got shape {data.shape}")
        if self.valid is None:
            valid = np.isfinite(data) & (data > 0)
        else:
            valid = np.array(self.valid, dtype=bool)
            if valid.shape != data.shape:
                raise InputError(f"Validity mask shape {valid.shape} != depth shape {data.shape}")
            if np.any(valid & ~(np.isfinite(data) & (data > 0))):
                raise InputError("Valid depths must be finite and positive")
        data[~valid] = 0.0
        object.__setattr__(self, 'data', _frozen(data))
        object.__setattr__(self, 'valid', _frozen(valid))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple:
        return self.data.shape


@dataclass(frozen=True)
class FloatMap:
    """Row-major real-valued raster (matching, geometric and respond maps)"""
    data: np.ndarray  # (height, width) float64

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise InputError(f"Float map must be 2D, got shape {data.shape}")
        object.__setattr__(self, 'data', _frozen(data))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @classmethod
    def zeros(cls, height: int, width: int) -> 'FloatMap':
        return cls(np.zeros((height, width)))


@dataclass(frozen=True)
class Frame:
    """Registered gray + depth pair, the pipeline's input unit"""
    gray: GrayImage
    depth: DepthImage
    camera: CameraIntrinsics
    index: int = 0

    def __post_init__(self):
        if self.gray.shape != self.depth.shape:
            raise InputError(f"Gray {self.gray.width}x{self.gray.height} and depth "
                             f"{self.depth.width}x{self.depth.height} differ in size")
        if self.gray.shape != self.camera.shape:
            raise InputError(f"Camera raster {self.camera.width}x{self.camera.height} does not "
                             f"match frame {self.gray.width}x{self.gray.height}")

    @property
    def width(self) -> int:
        return self.gray.width

    @property
    def height(self) -> int:
        return self.gray.height
