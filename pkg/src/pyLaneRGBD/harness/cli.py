"""
Command-line toolbench: generate, detect, eval, bench
"""

import argparse
import logging
from pathlib import Path
import sys
from typing import List, Optional
from ..core.config import Config, parse_config
from ..core.dataset import Dataset, frame_stem
from ..core.errors import LaneError
from ..synth.dataset import make_dataset
from ..synth.scene import SCENARIOS, scenario
from ..utils.overlay import save_overlay
from .bench import MACHINE_HEADER, bench_report, stage_stats
from .evaluation import evaluate
from .pipeline import run_pipeline, write_results

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_IO = 2
RESULTS_FILE = "results.txt"


def _load_config(args: argparse.Namespace) -> Config:
    return parse_config(args.config) if args.config else Config()


def _detect_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("dataset", type=Path, help="Dataset directory")
    parser.add_argument("--config", type=Path, help="key = value parameter file")
    parser.add_argument("--no-feedback", action="store_true",
                        help="Process frames independently (no angle feedback)")
    parser.add_argument("--workers", type=int, default=1,
                        help="Threads for --no-feedback runs (default: 1)")


def cmd_generate(args: argparse.Namespace) -> int:
    spec = scenario(args.scenario, seed=args.seed)
    manifest = make_dataset(spec, args.frames, args.out)
    print(f"Wrote {len(manifest)} {args.scenario} frames to {args.out}")
    return EXIT_OK


def cmd_detect(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    dataset = Dataset.open(args.dataset)
    results = run_pipeline(dataset, cfg, feedback=not args.no_feedback, workers=args.workers)
    out = args.out if args.out is not None else args.dataset
    out.mkdir(parents=True, exist_ok=True)
    write_results(results, out / RESULTS_FILE)
    if args.overlay:
        for result in results:
            gray = dataset.load_frame(result.frame_index).gray
            save_overlay(gray, result, out / f"{frame_stem(result.frame_index)}.overlay.pgm")
    detected = sum(r.detected for r in results)
    print(f"Detected {detected} of {len(results)} frames, results in {out / RESULTS_FILE}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    dataset = Dataset.open(args.dataset)
    results = run_pipeline(dataset, cfg, feedback=not args.no_feedback, workers=args.workers)
    report = evaluate(results, dataset, cfg.tolerance_px, cfg.tolerance_deg)
    print(report.summary())
    print()
    print(MACHINE_HEADER)
    for s in stage_stats(results):
        print(s.to_line())
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    results = run_pipeline(args.dataset, cfg, feedback=not args.no_feedback, workers=args.workers)
    print(bench_report(results))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lanergbd",
        description="RGB-D lane marker detection toolbench",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Render a synthetic dataset")
    gen.add_argument("--out", type=Path, required=True, help="Output directory")
    gen.add_argument("--frames", type=int, default=200, help="Frame count (default: 200)")
    gen.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    gen.add_argument("--scenario", choices=sorted(SCENARIOS), default="summer",
                     help="Road condition preset (default: summer)")
    gen.set_defaults(func=cmd_generate)

    det = sub.add_parser("detect", help="Detect lanes and write a results file")
    _detect_args(det)
    det.add_argument("--out", type=Path, help="Output directory (default: the dataset)")
    det.add_argument("--overlay", action="store_true",
                     help="Write gray overlays with chain centres and peaks")
    det.set_defaults(func=cmd_detect)

    ev = sub.add_parser("eval", help="Score detections against ground truth")
    _detect_args(ev)
    ev.set_defaults(func=cmd_eval)

    bench = sub.add_parser("bench", help="Per-stage timing report")
    _detect_args(bench)
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    CLI entry point

    Returns:
        0 on success, 1 on usage, input or configuration errors, 2 on I/O errors
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 after --help and 2 on usage errors
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (LaneError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_INPUT
    except OSError as e:
        logger.error("%s", e)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
