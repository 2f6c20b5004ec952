"""
Lane detection definitions and constants
"""

import math

# Template and window sizes
TEMPLATE_SIZE = 32        # Square template edge in pixels
FALS_WINDOW = 5           # FALS neighbourhood edge in pixels
MIN_TEMPLATE_SIZE = 8
MIN_FALS_SAMPLES = 3      # Valid depths needed for a window fit

# Respond map weights
TAU_C = 160               # Half-binary intensity threshold
T_D = 20.0                # Depth threshold for the geometric map (m)
ALPHA = 0.4               # Normal alignment weight
BETA = 0.1                # Depth / row weight
TAU_G = 0.5               # Matching score needed before G is added
NCC_FLOOR = 0.0

# Template enhancement
JUMP_STEP = 5             # Minimum sliding-box jump step r (pixels)
P_PCA = 0.75              # Respond activation threshold
ISOTROPY_RATIO = 1.05     # Eigenvalue ratio below which PCA keeps the old angle
LEFT_THETA_DEG = 110.0    # Nominal left stripe angle, right is mirrored
THETA_SEARCH_STEP_DEG = 10.0

# Numerical limits
SINGULAR_COND = 1e12      # Condition estimate above which M is unusable
COLLINEAR_EPS = 1e-9
LOOKUP_RADIUS = 3         # 7x7 nearest-valid search

# Evaluation defaults
TOLERANCE_PX = 5.0
TOLERANCE_DEG = 5.0
CHAIN_HIT_FRACTION = 0.8  # Centres near markers needed for a true positive
CHAIN_MISS_FRACTION = 0.2 # Centres away from markers that flag a false positive

# Raster formats
GRAY_MAXVAL = 255
DEPTH_MAXVAL = 65535
DEPTH_UNIT = 1000.0       # Stored depth units per metre (millimetres)

# Synthetic scene tones (gray levels)
ROAD_TONE = 90
MARKER_TONE = 250
OBSTACLE_TONE = 140
SKY_TONE = 30
FOG_TONE = 128
MAX_RANGE = 60.0          # Sensor range (m), depths beyond are invalid

# Ground-truth mask encoding
MASK_MARKER = 255
MASK_OBSTACLE = 128

# Default camera (640x480 pinhole)
DEFAULT_WIDTH = 640
DEFAULT_HEIGHT = 480
DEFAULT_FOCAL = 500.0

# BT.601 luma weights for colour frames
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

# Pipeline stage names, in execution order
STAGES = ("preprocess", "matching", "respond", "enhance", "lanefit")


def default_focal(width: int) -> float:
    """
    Focal length for a camera with the default field of view

    Args:
        width: Raster width in pixels

    Returns:
        Focal length in pixels, scaled from 500 px at 640 px width
    """
    if width <= 0:
        raise ValueError(f"Width must be positive, got {width}")
    return DEFAULT_FOCAL * width / DEFAULT_WIDTH


def fold_angle(theta: float) -> float:
    """Fold an orientation angle into [0, pi)."""
    folded = math.fmod(theta, math.pi)
    if folded < 0:
        folded += math.pi
    # fmod can land exactly on pi after the correction
    return 0.0 if folded >= math.pi else folded
