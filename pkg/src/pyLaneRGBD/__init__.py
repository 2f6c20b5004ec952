"""
pyLaneRGBD - RGB-D lane marker detection, synthetic road scenes and evaluation
"""

__version__ = "0.1.0"

from . import core
from . import stages
from . import synth
from . import harness
from . import utils
from .core.config import Config, parse_config
from .core.detector import LaneDetector, DetectionResult
from .harness.pipeline import run_pipeline
from .harness.evaluation import evaluate
from .harness.bench import bench_report
from .synth.scene import SceneSpec, scenario
from .synth.dataset import make_dataset

# Recommended usage in documentation
__recommended_import__ = "import pyLaneRGBD as plr"

# Make commonly used classes available in the root namespace
__all__ = [
    'Config',
    'parse_config',
    'LaneDetector',
    'DetectionResult',
    'run_pipeline',
    'evaluate',
    'bench_report',
    'SceneSpec',
    'scenario',
    'make_dataset',
]
