"""
Dataset directory layout

    NNNNNN.gray.pgm   (or NNNNNN.gray.ppm for colour frames)
    NNNNNN.depth.pgm
    NNNNNN.mask.pgm   optional ground truth, 255 = marker, 128 = obstacle
    NNNNNN.plane.txt  optional ground truth, `nx ny nz px py pz`
    camera.txt        optional `fx fy cx cy width height`
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union
import numpy as np
from .camera import CameraIntrinsics
from .definitions import MASK_MARKER, MASK_OBSTACLE
from .errors import InputError, FormatError
from .pnm import PnmImage, load_frame_pair, read_pnm, write_pnm
from .rasters import Frame

logger = logging.getLogger(__name__)

CAMERA_FILE = "camera.txt"
MANIFEST_FILE = "manifest.txt"
_GRAY_PATTERN = re.compile(r"^(\d{6})\.gray\.(pgm|ppm)$")


def frame_stem(index: int) -> str:
    """Zero-padded six-digit frame name"""
    if not 0 <= index <= 999999:
        raise InputError(f"Frame index {index} outside 0..999999")
    return f"{index:06d}"


@dataclass
class Dataset:
    """Frames on disk in the toolbench layout"""
    root: Path
    indices: List[int]
    camera: Optional[CameraIntrinsics] = None
    gray_suffix: str = "pgm"

    @classmethod
    def open(cls, root: Union[str, Path]) -> 'Dataset':
        """
        Scan a dataset directory

        Raises:
            InputError: Missing directory, no frames, or a gray frame without depth
        """
        root = Path(root)
        if not root.is_dir():
            raise InputError(f"Dataset directory {root} does not exist")
        found = {}
        for path in root.iterdir():
            match = _GRAY_PATTERN.match(path.name)
            if match:
                found[int(match.group(1))] = match.group(2)
        if not found:
            raise InputError(f"No NNNNNN.gray.pgm frames in {root}")
        suffixes = set(found.values())
        if len(suffixes) > 1:
            raise InputError(f"Mixed gray formats in {root}: {sorted(suffixes)}")
        indices = sorted(found)
        for index in indices:
            depth = root / f"{frame_stem(index)}.depth.pgm"
            if not depth.is_file():
                raise InputError(f"Frame {frame_stem(index)} has no depth file")
        camera = None
        camera_path = root / CAMERA_FILE
        if camera_path.is_file():
            try:
                camera = CameraIntrinsics.from_line(camera_path.read_text(encoding='utf-8').strip())
            except ValueError as exc:
                raise InputError(f"Bad {CAMERA_FILE}: {exc}") from None
        logger.debug("Opened dataset %s with %d frames", root, len(indices))
        return cls(root, indices, camera, suffixes.pop())

    def __len__(self) -> int:
        return len(self.indices)

    def gray_path(self, index: int) -> Path:
        return self.root / f"{frame_stem(index)}.gray.{self.gray_suffix}"

    def depth_path(self, index: int) -> Path:
        return self.root / f"{frame_stem(index)}.depth.pgm"

    def mask_path(self, index: int) -> Path:
        return self.root / f"{frame_stem(index)}.mask.pgm"

    def plane_path(self, index: int) -> Path:
        return self.root / f"{frame_stem(index)}.plane.txt"

    def has_ground_truth(self, index: int) -> bool:
        return self.mask_path(index).is_file() and self.plane_path(index).is_file()

    def load_frame(self, index: int) -> Frame:
        return load_frame_pair(self.gray_path(index), self.depth_path(index), self.camera, index)

    def load_masks(self, index: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Ground-truth masks of a frame

        Returns:
            (marker mask, obstacle mask) boolean arrays

        Raises:
            InputError: Mask file missing
        """
        path = self.mask_path(index)
        if not path.is_file():
            raise InputError(f"Frame {frame_stem(index)} has no ground-truth mask")
        image = read_pnm(path)
        if image.pixels.ndim != 2:
            raise FormatError(f"{path.name} must be a P5 raster")
        return image.pixels == MASK_MARKER, image.pixels == MASK_OBSTACLE

    def read_plane_line(self, index: int) -> str:
        path = self.plane_path(index)
        if not path.is_file():
            raise InputError(f"Frame {frame_stem(index)} has no ground-truth plane")
        return path.read_text(encoding='utf-8').strip()


def write_mask(path: Union[str, Path], marker: np.ndarray, obstacle: np.ndarray) -> None:
    """Encode marker/obstacle masks in one 8-bit P5 raster"""
    encoded = np.zeros(marker.shape, dtype=np.uint8)
    encoded[obstacle] = MASK_OBSTACLE
    encoded[marker] = MASK_MARKER
    write_pnm(path, PnmImage(encoded, 255))
