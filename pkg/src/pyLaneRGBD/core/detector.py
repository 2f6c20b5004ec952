"""
Per-stream lane detector: runs the five stages on one frame at a time and
carries the template-angle feedback between frames
"""

from dataclasses import dataclass, field
import logging
import math
import time
from typing import Dict, Optional, Tuple
import numpy as np
from .camera import CameraIntrinsics
from .config import Config
from .definitions import STAGES
from .errors import DegeneratePlaneError, DegenerateRegionError, DepthGapError
from .lane_types import FrameStatus, Side, SkipReason
from .rasters import Frame
from ..stages.preprocess import FalsPrecomp, backproject, fals_normals, fals_precompute, to_half_binary
from ..stages.matching import (
    Template,
    candidate_angles,
    make_template,
    ncc_match,
    patch_stats,
    sweep_templates,
)
from ..stages.respond import RespondMaps, fuse, geom_map
from ..stages.enhance import MarkerChain, PeakRegion, pca_angle, select_peak_region, trace_marker
from ..stages.lanefit import LanePlane, fit_plane, furthest_center

logger = logging.getLogger(__name__)


@dataclass
class DetectionResult:
    """Outcome of one frame"""
    frame_index: int
    status: FrameStatus
    skip_reason: Optional[SkipReason] = None
    left_chain: Optional[MarkerChain] = None
    right_chain: Optional[MarkerChain] = None
    plane: Optional[LanePlane] = None
    stage_timings: Dict[str, float] = field(default_factory=dict)  # Milliseconds
    refined_theta: float = math.nan   # Left stripe angle handed to the next frame (radians)
    left_peak: Optional[Tuple[int, int]] = None
    right_peak: Optional[Tuple[int, int]] = None
    maps: Optional[RespondMaps] = None

    def __post_init__(self):
        if self.status is FrameStatus.DETECTED:
            if self.plane is None or self.left_chain is None or self.right_chain is None:
                raise ValueError("Detected frames need a plane and both chains")
        elif self.skip_reason is None:
            raise ValueError("Skipped frames need a reason")

    @property
    def detected(self) -> bool:
        return self.status is FrameStatus.DETECTED

    @property
    def total_ms(self) -> float:
        return sum(self.stage_timings.values())

    def status_text(self) -> str:
        if self.detected:
            return "detected"
        return f"skipped:{self.skip_reason.value}"


class _StageClock:
    """Accumulates wall-clock milliseconds per stage"""

    def __init__(self):
        self.timings = {name: 0.0 for name in STAGES}
        self._stage = None
        self._start = 0.0

    def start(self, stage: str) -> None:
        self.stop()
        self._stage = stage
        self._start = time.perf_counter()

    def stop(self) -> None:
        if self._stage is not None:
            self.timings[self._stage] += (time.perf_counter() - self._start) * 1e3
            self._stage = None


class LaneDetector:
    """High-level interface for detecting lanes in an RGB-D stream"""

    def __init__(self, cfg: Optional[Config] = None):
        """
        Initialize detector

        Args:
            cfg: Pipeline parameters, defaults when None
        """
        self.cfg = cfg if cfg is not None else Config()
        self.feedback = True
        self.keep_maps = False
        self.left_theta = self.cfg.template_theta
        self.right_theta = self.cfg.template_theta
        self.refined = False
        self._precomp: Optional[FalsPrecomp] = None

    def with_feedback(self, enabled: bool = True) -> 'LaneDetector':
        """
        Enable or disable cross-frame angle refinement

        Without feedback every frame starts from the configured angle,
        which makes frames independent of each other.

        Returns:
            Self for method chaining
        """
        self.feedback = enabled
        return self

    def with_maps(self, keep: bool = True) -> 'LaneDetector':
        """Attach the respond maps to every result. Returns self for chaining"""
        self.keep_maps = keep
        return self

    def prepare(self, camera: CameraIntrinsics) -> 'LaneDetector':
        """
        Pre-compute the FALS matrices for a camera

        Returns:
            Self for method chaining
        """
        if self._precomp is None or self._precomp.camera != camera:
            logger.debug("FALS precompute for %dx%d camera", camera.width, camera.height)
            self._precomp = fals_precompute(camera, self.cfg.fals_window, self.cfg.range_mode)
        return self

    def reset(self) -> 'LaneDetector':
        """Forget the refined angles, as at the start of a new stream"""
        self.left_theta = self.cfg.template_theta
        self.right_theta = self.cfg.template_theta
        self.refined = False
        return self

    def templates(self) -> Tuple[Template, Template]:
        """Left and right templates at the current nominal angles"""
        size = self.cfg.template_size
        width = self.cfg.template_stripe_width
        return (make_template(size, self.left_theta, width, Side.LEFT),
                make_template(size, self.right_theta, width, Side.RIGHT))

    def detect(self, frame: Frame) -> DetectionResult:
        """
        Run preprocess, matching, respond, enhance and lanefit on one frame

        Args:
            frame: Gray and depth pair with intrinsics

        Returns:
            DetectionResult; frames whose respond peaks miss pPca or whose
            plane cannot be fitted are skipped with a reason
        """
        cfg = self.cfg
        clock = _StageClock()

        clock.start("preprocess")
        self.prepare(frame.camera)
        half = to_half_binary(frame.gray, cfg.tau_c)
        grid = backproject(frame.depth, frame.camera)
        normals = fals_normals(grid, frame.depth, self._precomp)

        clock.start("matching")
        left_t, right_t = self.templates()
        stats = patch_stats(half, left_t.size)
        m_left = ncc_match(half, left_t, cfg.ncc_floor, stats)
        m_right = ncc_match(half, right_t, cfg.ncc_floor, stats)

        clock.start("respond")
        g = geom_map(normals, frame.depth, cfg)
        maps = RespondMaps(fuse(m_left, g, cfg.tau_g), fuse(m_right, g, cfg.tau_g), g)

        clock.start("enhance")
        left = select_peak_region(maps.left, cfg.p_pca)
        right = select_peak_region(maps.right, cfg.p_pca)

        if (left is None or right is None) and self._may_sweep():
            clock.start("matching")
            angles = candidate_angles(cfg.theta_search_step_deg)
            if left is None:
                left_t, m_left = sweep_templates(half, left_t, angles, cfg.ncc_floor, stats)
            if right is None:
                right_t, m_right = sweep_templates(half, right_t, angles, cfg.ncc_floor, stats)
            clock.start("respond")
            maps = RespondMaps(fuse(m_left, g, cfg.tau_g), fuse(m_right, g, cfg.tau_g), g)
            clock.start("enhance")
            left = select_peak_region(maps.left, cfg.p_pca)
            right = select_peak_region(maps.right, cfg.p_pca)
            if left is not None and right is not None:
                logger.debug("Frame %d: angle sweep settled on %.1f / %.1f deg", frame.index,
                             math.degrees(left_t.theta), math.degrees(right_t.theta))

        kept = maps if self.keep_maps else None
        if left is None or right is None:
            clock.stop()
            logger.debug("Frame %d: respond peak below %.2f", frame.index, cfg.p_pca)
            return self._skipped(frame.index, SkipReason.NO_PEAK, clock, left_t, kept)

        left_angle = self._region_angle(left, left_t.stripe_angle)
        right_angle = self._region_angle(right, right_t.stripe_angle)
        left_chain = trace_marker(maps.left, left, left_angle, cfg, Side.LEFT)
        right_chain = trace_marker(maps.right, right, right_angle, cfg, Side.RIGHT)
        self._refine(left_t, right_t, left_angle, right_angle)

        clock.start("lanefit")
        try:
            far = furthest_center(grid, right_chain.centers)
            plane = fit_plane(grid, left.peak, right.peak, far)
        except DepthGapError as e:
            clock.stop()
            logger.debug("Frame %d: %s", frame.index, e)
            return self._skipped(frame.index, SkipReason.DEPTH_GAP, clock, left_t, kept,
                                 left_chain, right_chain, left.peak, right.peak)
        except DegeneratePlaneError as e:
            clock.stop()
            logger.debug("Frame %d: %s", frame.index, e)
            return self._skipped(frame.index, SkipReason.DEGENERATE_PLANE, clock, left_t, kept,
                                 left_chain, right_chain, left.peak, right.peak)
        clock.stop()
        return DetectionResult(frame.index, FrameStatus.DETECTED, None, left_chain, right_chain,
                               plane, clock.timings, self._handed_theta(left_t), left.peak,
                               right.peak, kept)

    def _may_sweep(self) -> bool:
        return self.cfg.theta_search_step_deg > 0 and not (self.feedback and self.refined)

    def _region_angle(self, region: PeakRegion, fallback: float) -> float:
        try:
            return pca_angle(region, previous=fallback)
        except DegenerateRegionError:
            return fallback

    def _refine(self, left_t: Template, right_t: Template, left_angle: float,
                right_angle: float) -> None:
        if not self.feedback:
            return
        # Nominal angles: the left stripe angle as is, the right one mirrored
        self.left_theta = left_angle if 0.0 < left_angle < math.pi else left_t.theta
        self.right_theta = math.pi - right_angle if 0.0 < right_angle < math.pi else right_t.theta
        self.refined = True

    def _handed_theta(self, left_t: Template) -> float:
        return self.left_theta if self.feedback else left_t.stripe_angle

    def _skipped(self, index: int, reason: SkipReason, clock: _StageClock, left_t: Template,
                 maps: Optional[RespondMaps], left_chain: Optional[MarkerChain] = None,
                 right_chain: Optional[MarkerChain] = None,
                 left_peak: Optional[Tuple[int, int]] = None,
                 right_peak: Optional[Tuple[int, int]] = None) -> DetectionResult:
        return DetectionResult(index, FrameStatus.SKIPPED, reason, left_chain, right_chain, None,
                               clock.timings, self._handed_theta(left_t), left_peak, right_peak,
                               maps)


def peak_pixels(result: DetectionResult) -> np.ndarray:
    """(n, 2) array of the result's peak pixels (x, y)"""
    peaks = [p for p in (result.left_peak, result.right_peak) if p is not None]
    return np.array(peaks, dtype=np.float64).reshape(-1, 2)
