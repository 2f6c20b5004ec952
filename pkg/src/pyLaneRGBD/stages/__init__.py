"""
Detection stages in pipeline order
"""

from .preprocess import to_half_binary, backproject, fals_precompute, fals_normals
from .matching import Template, make_template, rotate_template, patch_stats, ncc_match
from .respond import geom_map, fuse
from .enhance import PeakRegion, MarkerChain, select_peak_region, pca_angle, trace_marker
from .lanefit import LanePlane, lookup_3d, fit_plane

__all__ = [
    'to_half_binary',
    'backproject',
    'fals_precompute',
    'fals_normals',
    'Template',
    'make_template',
    'rotate_template',
    'patch_stats',
    'ncc_match',
    'geom_map',
    'fuse',
    'PeakRegion',
    'MarkerChain',
    'select_peak_region',
    'pca_angle',
    'trace_marker',
    'LanePlane',
    'lookup_3d',
    'fit_plane',
]
