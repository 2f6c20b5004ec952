"""
Synthetic dataset writer
"""

from dataclasses import dataclass
import logging
from pathlib import Path
from typing import List, Union
import numpy as np
from ..core.dataset import CAMERA_FILE, MANIFEST_FILE, frame_stem, write_mask
from ..core.pnm import save_gray, save_depth
from .renderer import render_frame
from .scene import SceneSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Manifest:
    """What make_dataset wrote"""
    path: Path
    indices: List[int]
    offsets: List[float]    # Vehicle advance per frame (m)
    headings: List[float]   # Heading jitter per frame (radians)

    def __len__(self) -> int:
        return len(self.indices)


def frame_motion(spec: SceneSpec, frames: int) -> tuple:
    """Vehicle advance and seeded heading jitter of every frame"""
    offsets = [k * spec.speed for k in range(frames)]
    if spec.heading_sigma == 0:
        return offsets, [0.0] * frames
    headings = [float(np.random.default_rng([spec.seed, k, 1]).normal(0.0, spec.heading_sigma))
                for k in range(frames)]
    return offsets, headings


def make_dataset(spec: SceneSpec, frames: int, out_dir: Union[str, Path]) -> Manifest:
    """
    Render a driving sequence into the dataset layout

    Args:
        spec: Scene description
        frames: Number of frames (>= 1)
        out_dir: Output directory, created when missing

    Returns:
        Manifest of the written frames

    Raises:
        ValueError: frames < 1
        OSError: Unwritable directory
    """
    if frames < 1:
        raise ValueError(f"Need at least one frame, got {frames}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    offsets, headings = frame_motion(spec, frames)

    (out / CAMERA_FILE).write_text(spec.intrinsics.to_line() + "\n", encoding='utf-8')
    lines = ["# pyLaneRGBD synthetic dataset", f"frames = {frames}"]
    lines += spec.echo()
    for index in range(frames):
        frame, truth = render_frame(spec, offsets[index], headings[index], index)
        stem = frame_stem(index)
        save_gray(frame.gray, out / f"{stem}.gray.pgm")
        save_depth(frame.depth, out / f"{stem}.depth.pgm")
        write_mask(out / f"{stem}.mask.pgm", truth.marker_mask, truth.obstacle_mask)
        (out / f"{stem}.plane.txt").write_text(truth.plane.to_line() + "\n", encoding='utf-8')
        lines.append(f"frame {stem} offset={offsets[index]:.3f} heading={headings[index]:.6f}")
        logger.debug("Rendered frame %s", stem)

    path = out / MANIFEST_FILE
    path.write_text("\n".join(lines) + "\n", encoding='utf-8')
    logger.info("Wrote %d frames to %s", frames, out)
    return Manifest(path, list(range(frames)), offsets, headings)
