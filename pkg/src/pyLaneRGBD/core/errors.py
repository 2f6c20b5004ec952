"""
Exceptions raised by the lane detection toolbench
"""

from typing import Optional


class LaneError(Exception):
    """Base class for all toolbench errors"""


class FormatError(LaneError, ValueError):
    """Malformed raster or text file"""


class InputError(LaneError, ValueError):
    """Inputs that do not fit together (dimensions, dataset layout)"""


class ParameterError(LaneError, ValueError):
    """Out-of-range argument to an operation"""


class ConfigError(LaneError, ValueError):
    """Invalid configuration file or value"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DepthGapError(LaneError):
    """No valid depth near a detected pixel"""


class DegeneratePlaneError(LaneError):
    """Plane points are collinear"""


class DegenerateRegionError(LaneError):
    """Region too small for PCA"""
