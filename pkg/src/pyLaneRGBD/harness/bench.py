"""
Per-stage timing statistics
"""

from dataclasses import dataclass
from typing import List, Sequence
import numpy as np
from ..core.definitions import STAGES
from ..core.detector import DetectionResult

MACHINE_HEADER = "stage,mean_ms,median_ms,p95_ms,share"


@dataclass(frozen=True)
class StageStats:
    """Timing of one stage over a run, in milliseconds"""
    stage: str
    mean: float
    median: float
    p95: float
    share: float   # Fraction of the mean total, 0 when the total is 0

    def to_line(self) -> str:
        return f"{self.stage},{self.mean:.4f},{self.median:.4f},{self.p95:.4f},{self.share:.4f}"


def stage_stats(results: Sequence[DetectionResult]) -> List[StageStats]:
    """
    Mean, median, p95 and share of every stage, followed by a `total` row

    Raises:
        ValueError: No results
    """
    if not results:
        raise ValueError("Timing statistics need at least one result")
    table = np.array([[r.stage_timings.get(stage, 0.0) for stage in STAGES] for r in results])
    totals = table.sum(axis=1)
    mean_total = float(totals.mean())
    stats = []
    for k, stage in enumerate(STAGES):
        column = table[:, k]
        mean = float(column.mean())
        share = mean / mean_total if mean_total > 0 else 0.0
        stats.append(StageStats(stage, mean, float(np.median(column)),
                                float(np.percentile(column, 95)), share))
    stats.append(StageStats("total", mean_total, float(np.median(totals)),
                            float(np.percentile(totals, 95)), 1.0 if mean_total > 0 else 0.0))
    return stats


def bench_report(results: Sequence[DetectionResult]) -> str:
    """
    Timing summary as an aligned table followed by machine-readable lines

    Args:
        results: At least one detection result

    Returns:
        Report text
    """
    stats = stage_stats(results)
    lines = [f"Frames: {len(results)}",
             f"{'stage':<12}{'mean ms':>10}{'median ms':>12}{'p95 ms':>10}{'share':>9}"]
    for s in stats:
        lines.append(f"{s.stage:<12}{s.mean:>10.3f}{s.median:>12.3f}{s.p95:>10.3f}"
                     f"{s.share * 100:>8.1f}%")
    lines.append("")
    lines.append(MACHINE_HEADER)
    lines.extend(s.to_line() for s in stats)
    return "\n".join(lines)
