"""
Core rasters, camera model, configuration and dataset I/O
"""

from .lane_types import Side, MarkerStyle, RangeMode, FrameStatus, SkipReason, Verdict
from .errors import (
    LaneError,
    FormatError,
    InputError,
    ParameterError,
    ConfigError,
    DepthGapError,
    DegeneratePlaneError,
    DegenerateRegionError,
)
from .camera import CameraIntrinsics
from .rasters import GrayImage, DepthImage, FloatMap, Frame
from .config import Config, parse_config
from .pnm import load_frame_pair, save_float_map, load_float_map
from .dataset import Dataset

__all__ = [
    'Side',
    'MarkerStyle',
    'RangeMode',
    'FrameStatus',
    'SkipReason',
    'Verdict',
    'LaneError',
    'FormatError',
    'InputError',
    'ParameterError',
    'ConfigError',
    'DepthGapError',
    'DegeneratePlaneError',
    'DegenerateRegionError',
    'CameraIntrinsics',
    'GrayImage',
    'DepthImage',
    'FloatMap',
    'Frame',
    'Config',
    'parse_config',
    'load_frame_pair',
    'save_float_map',
    'load_float_map',
    'Dataset',
]
