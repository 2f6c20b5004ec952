"""
Pipeline runs, evaluation, timing reports and the command line
"""

from .pipeline import run_pipeline, write_results, read_results
from .evaluation import EvalReport, evaluate
from .bench import bench_report

__all__ = ['run_pipeline', 'write_results', 'read_results', 'EvalReport', 'evaluate', 'bench_report']
