"""
True/false positive evaluation against synthetic ground truth
"""

from dataclasses import dataclass, field
import logging
import math
from typing import Dict, List, Sequence, Tuple, Union
from pathlib import Path
import numpy as np
from scipy import ndimage
from ..core.dataset import Dataset
from ..core.definitions import CHAIN_HIT_FRACTION, CHAIN_MISS_FRACTION, TOLERANCE_DEG, TOLERANCE_PX
from ..core.detector import DetectionResult
from ..core.errors import InputError
from ..core.lane_types import Verdict
from ..stages.lanefit import LanePlane
from .bench import stage_stats

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FrameVerdict:
    index: int
    verdict: Verdict
    angle_error: float = math.nan    # Degrees
    hit_fraction: float = math.nan   # Chain centres within tolerance of a marker


@dataclass
class EvalReport:
    """Detection quality over a dataset"""
    frames: int
    true_positive_rate: float
    false_positive_rate: float
    per_frame: List[FrameVerdict] = field(default_factory=list)
    timing_summary: Dict[str, Tuple[float, float]] = field(default_factory=dict)  # (mean, median) ms

    def __post_init__(self):
        for name in ('true_positive_rate', 'false_positive_rate'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    def count(self, verdict: Verdict) -> int:
        return sum(v.verdict is verdict for v in self.per_frame)

    def summary(self) -> str:
        lines = [f"Frames: {self.frames}",
                 f"True positive rate:  {self.true_positive_rate * 100:.1f}%",
                 f"False positive rate: {self.false_positive_rate * 100:.1f}%",
                 "Verdicts: " + ", ".join(f"{v.value}={self.count(v)}" for v in Verdict)]
        if self.timing_summary:
            lines.append("Stage timings (mean / median ms):")
            for stage, (mean, median) in self.timing_summary.items():
                lines.append(f"  {stage:<12}{mean:>9.3f} /{median:>9.3f}")
        return "\n".join(lines)


def marker_distance(marker_mask: np.ndarray) -> np.ndarray:
    """Distance of every pixel to the nearest marker pixel, inf without markers"""
    if not marker_mask.any():
        return np.full(marker_mask.shape, np.inf)
    return ndimage.distance_transform_edt(~marker_mask)


def chain_hit_fraction(centers: np.ndarray, distance: np.ndarray, tolerance_px: float) -> float:
    """Fraction of (x, y) centres whose pixel lies within tolerance of a marker"""
    if len(centers) == 0:
        return 0.0
    height, width = distance.shape
    cols = np.clip(np.floor(centers[:, 0] + 0.5).astype(int), 0, width - 1)
    rows = np.clip(np.floor(centers[:, 1] + 0.5).astype(int), 0, height - 1)
    return float(np.mean(distance[rows, cols] <= tolerance_px))


def judge_frame(result: DetectionResult, marker_mask: np.ndarray, truth: LanePlane,
                tolerance_px: float, tolerance_deg: float) -> FrameVerdict:
    """
    Verdict of one frame

    Detected frames are true positives when the plane normal is within
    tolerance_deg of the truth and at least 80% of the chain centres lie
    within tolerance_px of a marker pixel, false positives when more than
    20% lie farther, and misses otherwise.
    """
    if not result.detected:
        return FrameVerdict(result.frame_index, Verdict.SKIPPED)
    centers = np.vstack([result.left_chain.centers, result.right_chain.centers])
    hits = chain_hit_fraction(centers, marker_distance(marker_mask), tolerance_px)
    angle = result.plane.angle_to(truth)
    if angle <= tolerance_deg and hits >= CHAIN_HIT_FRACTION:
        verdict = Verdict.TRUE_POSITIVE
    elif 1.0 - hits > CHAIN_MISS_FRACTION:
        verdict = Verdict.FALSE_POSITIVE
    else:
        verdict = Verdict.MISS
    return FrameVerdict(result.frame_index, verdict, angle, hits)


def evaluate(results: Sequence[DetectionResult], dataset: Union[Dataset, str, Path],
             tolerance_px: float = TOLERANCE_PX, tolerance_deg: float = TOLERANCE_DEG) -> EvalReport:
    """
    Score detection results against the dataset's ground truth

    Both rates use the total frame count as denominator, skipped frames
    count towards neither numerator.

    Args:
        results: One result per dataset frame
        dataset: Dataset or its directory, with masks and planes
        tolerance_px: Chain centre distance tolerance
        tolerance_deg: Plane normal angle tolerance

    Returns:
        EvalReport

    Raises:
        InputError: Missing ground truth or results not matching the frames
    """
    data = dataset if isinstance(dataset, Dataset) else Dataset.open(dataset)
    if sorted(r.frame_index for r in results) != data.indices:
        raise InputError(f"Results cover {len(results)} frames, dataset has {len(data)}")
    verdicts = []
    for result in sorted(results, key=lambda r: r.frame_index):
        index = result.frame_index
        if not data.has_ground_truth(index):
            raise InputError(f"Frame {index} has no ground truth")
        marker, _ = data.load_masks(index)
        truth = LanePlane.from_line(data.read_plane_line(index))
        verdicts.append(judge_frame(result, marker, truth, tolerance_px, tolerance_deg))

    total = len(data)
    tp = sum(v.verdict is Verdict.TRUE_POSITIVE for v in verdicts)
    fp = sum(v.verdict is Verdict.FALSE_POSITIVE for v in verdicts)
    timings = {s.stage: (s.mean, s.median) for s in stage_stats(results)} if results else {}
    logger.info("TP %d, FP %d of %d frames", tp, fp, total)
    return EvalReport(total, tp / total, fp / total, verdicts, timings)
