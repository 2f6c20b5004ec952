"""
Binary PGM/PPM codec and frame loading
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union
import numpy as np
from .camera import CameraIntrinsics
from .definitions import GRAY_MAXVAL, DEPTH_MAXVAL, DEPTH_UNIT, LUMA_WEIGHTS
from .errors import FormatError, InputError
from .rasters import GrayImage, DepthImage, FloatMap, Frame

PathLike = Union[str, Path]

_MAGIC_CHANNELS = {b'P5': 1, b'P6': 3}
_SCALE_PREFIX = 'scale='


@dataclass
class PnmImage:
    """Decoded P5/P6 raster with its header comments"""
    pixels: np.ndarray   # (h, w) or (h, w, 3), uint8 or uint16
    maxval: int
    magic: bytes = b'P5'
    comments: List[str] = field(default_factory=list)


def _parse_header(data: bytes):
    """Return (magic, width, height, maxval, comments, raster offset)"""
    tokens = []
    comments = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(data):
            raise FormatError("Truncated PNM header")
        byte = data[pos:pos + 1]
        if byte == b'#':
            end = data.find(b'\n', pos)
            if end < 0:
                raise FormatError("Unterminated header comment")
            comments.append(data[pos + 1:end].decode('ascii', errors='replace'))
            pos = end + 1
        elif byte.isspace():
            pos += 1
        else:
            start = pos
            while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b'#':
                pos += 1
            tokens.append(data[start:pos])
    # Exactly one whitespace byte separates maxval from the raster
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise FormatError("Missing whitespace after maxval")
    magic = tokens[0]
    if magic not in _MAGIC_CHANNELS:
        raise FormatError(f"Unsupported PNM magic {magic!r}, expected P5 or P6")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError(f"Non-numeric PNM header fields {tokens[1:]}") from None
    if width <= 0 or height <= 0:
        raise FormatError(f"Invalid PNM size {width}x{height}")
    if not 0 < maxval <= 65535:
        raise FormatError(f"Invalid PNM maxval {maxval}")
    return magic, width, height, maxval, comments, pos + 1


def read_pnm(path: PathLike) -> PnmImage:
    """
    Read a binary PGM (P5) or PPM (P6) file

    Args:
        path: File path

    Returns:
        PnmImage with 16-bit samples decoded big-endian when maxval > 255

    Raises:
        FormatError: Malformed header or truncated raster
        OSError: Unreadable file
    """
    data = Path(path).read_bytes()
    magic, width, height, maxval, comments, offset = _parse_header(data)
    channels = _MAGIC_CHANNELS[magic]
    dtype = np.dtype('>u2') if maxval > 255 else np.dtype(np.uint8)
    count = width * height * channels
    needed = count * dtype.itemsize
    if len(data) - offset < needed:
        raise FormatError(f"Raster truncated: {len(data) - offset} bytes, need {needed}")
    pixels = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
    pixels = pixels.astype(np.uint16 if maxval > 255 else np.uint8)
    shape = (height, width, 3) if channels == 3 else (height, width)
    return PnmImage(pixels.reshape(shape), maxval, magic, comments)


def write_pnm(path: PathLike, image: PnmImage) -> None:
    """Write a PnmImage as binary P5/P6"""
    pixels = np.asarray(image.pixels)
    height, width = pixels.shape[:2]
    header = [image.magic.decode('ascii')]
    header += [f"#{c}" for c in image.comments]
    header += [f"{width} {height}", str(image.maxval)]
    dtype = '>u2' if image.maxval > 255 else np.uint8
    payload = np.ascontiguousarray(pixels, dtype=dtype).tobytes()
    Path(path).write_bytes(("\n".join(header) + "\n").encode('ascii') + payload)


def gray_from_pnm(image: PnmImage) -> GrayImage:
    """8-bit gray from a P5 raster, or BT.601 luma of a P6 raster"""
    if image.maxval != GRAY_MAXVAL:
        raise FormatError(f"Gray image must have maxval {GRAY_MAXVAL}, got {image.maxval}")
    if image.pixels.ndim == 3:
        luma = image.pixels.astype(np.float64) @ np.array(LUMA_WEIGHTS)
        return GrayImage(np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8))
    return GrayImage(image.pixels)


def depth_from_pnm(image: PnmImage) -> DepthImage:
    """Millimetre P5 raster to metres; zero marks missing depth"""
    if image.pixels.ndim != 2 or image.maxval != DEPTH_MAXVAL:
        raise FormatError(f"Depth image must be P5 with maxval {DEPTH_MAXVAL}")
    stored = image.pixels
    return DepthImage(stored / DEPTH_UNIT, valid=stored > 0)


def load_frame_pair(gray_path: PathLike, depth_path: PathLike,
                    camera: Optional[CameraIntrinsics] = None, index: int = 0) -> Frame:
    """
    Load a registered gray + depth pair

    Args:
        gray_path: P5 (maxval 255) or P6 colour file
        depth_path: P5 file, maxval 65535, millimetres
        camera: Intrinsics; None uses the default camera for the raster size
        index: Frame index carried on the Frame

    Returns:
        Frame with depth in metres

    Raises:
        FormatError: Malformed header
        InputError: Raster dimensions differ
        OSError: Unreadable file
    """
    gray = gray_from_pnm(read_pnm(gray_path))
    depth = depth_from_pnm(read_pnm(depth_path))
    if gray.shape != depth.shape:
        raise InputError(f"Gray {gray.width}x{gray.height} and depth "
                         f"{depth.width}x{depth.height} differ in size")
    if camera is None:
        camera = CameraIntrinsics.default(gray.width, gray.height)
    return Frame(gray, depth, camera, index)


def save_gray(gray: GrayImage, path: PathLike) -> None:
    write_pnm(path, PnmImage(gray.data, GRAY_MAXVAL))


def save_depth(depth: DepthImage, path: PathLike) -> None:
    """Store depth as millimetres; depths beyond 65.535 m saturate"""
    stored = np.clip(np.floor(depth.data * DEPTH_UNIT + 0.5), 0, DEPTH_MAXVAL)
    stored[~depth.valid] = 0
    write_pnm(path, PnmImage(stored.astype(np.uint16), DEPTH_MAXVAL))


def save_float_map(fmap: FloatMap, path: PathLike) -> None:
    """
    Quantise [0, max] linearly to 16 bits and record max in a `# scale=` comment

    Args:
        fmap: Map with finite values; negatives are stored as 0
        path: Output file

    Raises:
        OSError: Unwritable path
    """
    data = fmap.data
    if not np.all(np.isfinite(data)):
        raise InputError("Float map contains non-finite values")
    scale = float(data.max()) if data.size else 0.0
    if scale > 0:
        levels = np.floor(np.clip(data, 0, scale) / scale * DEPTH_MAXVAL + 0.5)
    else:
        scale = 0.0
        levels = np.zeros(data.shape)
    comment = f" {_SCALE_PREFIX}{scale!r}"
    write_pnm(path, PnmImage(levels.astype(np.uint16), DEPTH_MAXVAL, comments=[comment]))


def load_float_map(path: PathLike) -> FloatMap:
    """Inverse of save_float_map"""
    image = read_pnm(path)
    scale = None
    for comment in image.comments:
        text = comment.strip()
        if text.startswith(_SCALE_PREFIX):
            try:
                scale = float(text[len(_SCALE_PREFIX):])
            except ValueError:
                raise FormatError(f"Bad scale comment {comment!r}") from None
    if scale is None or image.pixels.ndim != 2:
        raise FormatError("Float map needs a P5 raster with a '# scale=' comment")
    return FloatMap(image.pixels.astype(np.float64) / image.maxval * scale)
