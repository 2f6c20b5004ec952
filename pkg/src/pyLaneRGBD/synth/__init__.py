"""
Synthetic road scenes with pixel-exact ground truth
"""

from .scene import Box, ShadowBand, SceneSpec, SCENARIOS, scenario
from .renderer import GroundTruth, render_frame
from .dataset import Manifest, make_dataset

__all__ = ['Box', 'ShadowBand', 'SceneSpec', 'SCENARIOS', 'scenario',
           'GroundTruth', 'render_frame', 'Manifest', 'make_dataset']
