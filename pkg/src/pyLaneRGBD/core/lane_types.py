"""
Common types and enums for lane detection
"""

from enum import Enum, auto


class Side(Enum):
    """Lane marker side"""
    LEFT = auto()
    RIGHT = auto()


class MarkerStyle(Enum):
    """Painted marker pattern"""
    SOLID = auto()
    DASHED = auto()


class RangeMode(Enum):
    """Which distance FALS uses for r_i"""
    RANGE = auto()    # Euclidean distance to the point
    Z = auto()        # Depth along the optical axis


class FrameStatus(Enum):
    """Outcome of one pipeline pass"""
    DETECTED = auto()
    SKIPPED = auto()


class SkipReason(Enum):
    """Why a frame produced no lane plane"""
    NO_PEAK = "no-peak"
    DEPTH_GAP = "depth-gap"
    DEGENERATE_PLANE = "degenerate-plane"


class Verdict(Enum):
    """Per-frame evaluation verdict"""
    TRUE_POSITIVE = "tp"
    FALSE_POSITIVE = "fp"
    MISS = "miss"        # Detected, but neither criterion met
    SKIPPED = "skipped"
