from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import cycle, islice
from typing import Callable, Sequence

from ..pii import DetectorConfig

N_WARMUP = 50
N_TIMED = 200


@dataclass(frozen=True)
class LatencyStats:
    p50: float
    p95: float
    p99: float
    n_timed: int = N_TIMED
    n_warmup: int = N_WARMUP
    mean: float = 0.0

    def as_dict(self) -> dict:
        return {"p50_ms": self.p50, "p95_ms": self.p95, "p99_ms": self.p99, "mean_ms": self.mean,
                "n_timed": self.n_timed, "n_warmup": self.n_warmup}


def nearest_rank(sorted_values: Sequence[float], pct: float) -> float:
    """Nearest-rank percentile: the ceil(pct/100 * n)-th smallest value."""
    if not sorted_values:
        raise ValueError("no values")
    if not 0 < pct <= 100:
        raise ValueError(f"percentile out of range: {pct}")
    rank = max(1, math.ceil(pct / 100 * len(sorted_values)))
    return sorted_values[rank - 1]


def measure_latency(engine, config: DetectorConfig, sample_texts: Sequence[str], *,
                    n_warmup: int = N_WARMUP, n_timed: int = N_TIMED,
                    clock: Callable[[], int] = time.perf_counter_ns) -> LatencyStats:
    """Time ``engine.analyze`` per call. Texts are cycled if fewer than
    n_warmup + n_timed are supplied; warmup calls are not recorded."""
    if not sample_texts:
        raise ValueError("need at least one sample text")
    texts = list(islice(cycle(sample_texts), n_warmup + n_timed))
    for text in texts[:n_warmup]:
        engine.analyze(text, config)
    samples_ns = []
    for text in texts[n_warmup:]:
        t0 = clock()
        engine.analyze(text, config)
        samples_ns.append(clock() - t0)
    ms = sorted(ns / 1e6 for ns in samples_ns)
    return LatencyStats(
        p50=nearest_rank(ms, 50), p95=nearest_rank(ms, 95), p99=nearest_rank(ms, 99),
        n_timed=n_timed, n_warmup=n_warmup, mean=sum(ms) / len(ms),
    )
