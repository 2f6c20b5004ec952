"""
Dataset-level pipeline runs and the detection results file
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
import math
from pathlib import Path
from typing import List, Optional, Union
from ..core.config import Config
from ..core.dataset import Dataset
from ..core.detector import DetectionResult, LaneDetector
from ..core.errors import FormatError
from ..core.lane_types import FrameStatus, SkipReason

logger = logging.getLogger(__name__)

RESULTS_HEADER = "index,status,nx,ny,nz,px,py,pz,theta_deg,chain_len_left,chain_len_right"


def _as_dataset(dataset: Union[Dataset, str, Path]) -> Dataset:
    return dataset if isinstance(dataset, Dataset) else Dataset.open(dataset)


def run_pipeline(dataset: Union[Dataset, str, Path], cfg: Optional[Config] = None,
                 feedback: bool = True, workers: int = 1,
                 keep_maps: bool = False) -> List[DetectionResult]:
    """
    Detect lanes in every frame of a dataset, in index order

    Args:
        dataset: Dataset or its directory
        cfg: Pipeline parameters, defaults when None
        feedback: Carry the refined template angles from frame to frame
        workers: Threads for feedback-free runs; ignored with feedback
        keep_maps: Attach respond maps to the results

    Returns:
        One DetectionResult per frame

    Raises:
        InputError: Malformed dataset
    """
    data = _as_dataset(dataset)
    detector = LaneDetector(cfg).with_feedback(feedback).with_maps(keep_maps)
    if feedback and workers > 1:
        logger.warning("Angle feedback makes frames sequential, ignoring %d workers", workers)
        workers = 1

    first = data.load_frame(data.indices[0])
    detector.prepare(first.camera)
    logger.info("Processing %d frames from %s", len(data), data.root)

    def process(index: int) -> DetectionResult:
        frame = first if index == first.index else data.load_frame(index)
        return detector.detect(frame)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(process, data.indices))
    else:
        results = [process(index) for index in data.indices]

    detected = sum(r.detected for r in results)
    logger.info("Detected %d of %d frames", detected, len(results))
    return results


def format_result(result: DetectionResult) -> str:
    """One results-file line; timings are not part of it"""
    if result.plane is not None:
        plane = [f"{v:.9f}" for v in (*result.plane.normal, *result.plane.point)]
    else:
        plane = ["nan"] * 6
    left = len(result.left_chain) if result.left_chain is not None else 0
    right = len(result.right_chain) if result.right_chain is not None else 0
    theta = f"{math.degrees(result.refined_theta):.6f}"
    return ",".join([str(result.frame_index), result.status_text(), *plane, theta,
                     str(left), str(right)])


def write_results(results: List[DetectionResult], path: Union[str, Path]) -> None:
    lines = [RESULTS_HEADER] + [format_result(r) for r in results]
    Path(path).write_text("\n".join(lines) + "\n", encoding='utf-8')


@dataclass(frozen=True)
class ResultLine:
    """One parsed line of a results file"""
    index: int
    status: FrameStatus
    skip_reason: Optional[SkipReason]
    normal: tuple
    point: tuple
    theta_deg: float
    chain_len_left: int
    chain_len_right: int


def parse_result_line(line: str) -> ResultLine:
    """
    Parse one results-file line

    Raises:
        FormatError: Wrong field count or values
    """
    parts = line.strip().split(',')
    if len(parts) != 11:
        raise FormatError(f"Results line needs 11 fields, got {len(parts)}")
    try:
        status_text = parts[1]
        if status_text == "detected":
            status, reason = FrameStatus.DETECTED, None
        elif status_text.startswith("skipped:"):
            status, reason = FrameStatus.SKIPPED, SkipReason(status_text[len("skipped:"):])
        else:
            raise ValueError(f"unknown status {status_text!r}")
        values = [float(v) for v in parts[2:9]]
        return ResultLine(int(parts[0]), status, reason, tuple(values[:3]), tuple(values[3:6]),
                          values[6], int(parts[9]), int(parts[10]))
    except ValueError as e:
        raise FormatError(f"Bad results line {line.strip()!r}: {e}") from None


def read_results(path: Union[str, Path]) -> List[ResultLine]:
    """Read a file written by write_results"""
    lines = Path(path).read_text(encoding='utf-8').splitlines()
    if not lines or lines[0].strip() != RESULTS_HEADER:
        raise FormatError(f"{path} is not a detection results file")
    return [parse_result_line(line) for line in lines[1:] if line.strip()]
