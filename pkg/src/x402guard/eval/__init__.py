from .latency import LatencyStats, measure_latency, nearest_rank
from .report import render_markdown, write_report
from .scoring import Counts, EvalMetrics, f1_score, match_spans
from .sweep import SweepConfig, SweepReport, SweepRow, all_configs, evaluate, run_sweep, top3_ratio

__all__ = [
    "Counts",
    "EvalMetrics",
    "LatencyStats",
    "SweepConfig",
    "SweepReport",
    "SweepRow",
    "all_configs",
    "evaluate",
    "f1_score",
    "match_spans",
    "measure_latency",
    "nearest_rank",
    "render_markdown",
    "run_sweep",
    "top3_ratio",
    "write_report",
]
