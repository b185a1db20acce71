"""The 42-row configuration sweep plus the derived top-3 subset row."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from ..corpus import CorpusSample
from ..corpus.forms import FIELDS
from ..pii import ALL_ENTITIES, DetectorConfig, EntityType, Mode, PiiEngine, default_engine
from .latency import LatencyStats, measure_latency
from .scoring import EvalMetrics, match_spans

THRESHOLDS = (0.3, 0.4, 0.5, 0.6, 0.7)
RECOMMENDED_MIN_SCORE = 0.4
TOP3 = frozenset({EntityType.EMAIL_ADDRESS, EntityType.PERSON, EntityType.IBAN_CODE})
# PATTERN rows still carry a threshold for the detector; nothing it emits scores below this
PATTERN_MIN_SCORE = 0.0


def _subsets() -> list[frozenset[EntityType]]:
    return [frozenset({e}) for e in EntityType] + [ALL_ENTITIES]


def subset_label(subset: frozenset[EntityType]) -> str:
    if subset == ALL_ENTITIES:
        return "ALL"
    return "+".join(e.value for e in EntityType if e in subset)


@dataclass(frozen=True)
class SweepConfig:
    mode: Mode
    entity_subset: frozenset[EntityType]
    min_score: float | None = None

    def __post_init__(self) -> None:
        if not self.entity_subset:
            raise ValueError("entity subset must be nonempty")
        if self.mode is Mode.CONTEXTUAL and self.min_score is None:
            raise ValueError("CONTEXTUAL configs need a min_score")

    def detector(self) -> DetectorConfig:
        threshold = PATTERN_MIN_SCORE if self.mode is Mode.PATTERN else self.min_score
        return DetectorConfig(self.mode, self.entity_subset, threshold)

    @property
    def label(self) -> str:
        suffix = "" if self.mode is Mode.PATTERN else f"@{self.min_score}"
        return f"{self.mode.value}/{subset_label(self.entity_subset)}{suffix}"

    def as_dict(self) -> dict:
        return {"mode": self.mode.value, "entity_subset": subset_label(self.entity_subset),
                "entities": [e.value for e in EntityType if e in self.entity_subset],
                "min_score": self.min_score}


def all_configs() -> list[SweepConfig]:
    """7 PATTERN rows (threshold-insensitive) then 35 CONTEXTUAL rows."""
    rows = [SweepConfig(Mode.PATTERN, s) for s in _subsets()]
    rows += [SweepConfig(Mode.CONTEXTUAL, s, t) for s in _subsets() for t in THRESHOLDS]
    return rows


def evaluate(corpus: Sequence[CorpusSample], config: SweepConfig | DetectorConfig,
             engine: PiiEngine | None = None, fields: Iterable[str] = FIELDS) -> EvalMetrics:
    """Score one configuration per (sample, field)."""
    engine = engine or default_engine()
    det = config.detector() if isinstance(config, SweepConfig) else config
    metrics = EvalMetrics.for_entities(det.entities)
    fields = tuple(fields)
    for sample in corpus:
        for name in fields:
            text = sample.field_text(name)
            preds = engine.analyze(text, det)
            gold = [g for g in sample.labels if g.field == name and g.entity_type in det.entities]
            for et, counts in metrics.per_entity.items():
                p = [d for d in preds if d.entity_type is et]
                g = [x for x in gold if x.entity_type is et]
                if p or g:
                    counts.add(*match_spans(p, g, name))
    return metrics


@dataclass
class SweepRow:
    config: SweepConfig
    metrics: EvalMetrics
    derived: bool = False

    def as_dict(self) -> dict:
        return {"label": self.config.label, **self.config.as_dict(), "derived": self.derived,
                **self.metrics.as_dict()}


@dataclass
class SweepReport:
    rows: list[SweepRow]
    top3: SweepRow
    top3_ratio: float
    latency: dict[str, LatencyStats] = field(default_factory=dict)
    n_samples: int = 0
    n_gold: int = 0
    elapsed_s: float = 0.0

    def row(self, mode: Mode, subset: frozenset[EntityType] = ALL_ENTITIES, min_score: float | None = None) -> SweepRow:
        want = SweepConfig(mode, subset, None if mode is Mode.PATTERN else min_score)
        for r in self.rows:
            if r.config == want:
                return r
        raise KeyError(want.label)

    def as_dict(self) -> dict[str, Any]:
        return {
            "schema_version": 1,
            "n_samples": self.n_samples,
            "n_gold": self.n_gold,
            "n_configs": len(self.rows),
            "elapsed_s": round(self.elapsed_s, 3),
            "configs": [r.as_dict() for r in self.rows],
            "top3": {**self.top3.as_dict(), "top3_ratio": self.top3_ratio},
            "latency": {k: v.as_dict() for k, v in self.latency.items()},
        }


def top3_ratio(top3: EvalMetrics, full: EvalMetrics) -> float:
    """Top-3 true positives over full-set true positives. Both recalls share the
    full gold count as denominator, so this is the ratio of the two recalls."""
    return top3.micro.tp / full.micro.tp if full.micro.tp else 0.0


def latency_texts(corpus: Sequence[CorpusSample]) -> list[str]:
    return [s.field_text(f) for s in corpus for f in FIELDS]


def run_sweep(corpus: Sequence[CorpusSample], engine: PiiEngine | None = None,
              with_latency: bool = True) -> SweepReport:
    if not corpus:
        raise ValueError("empty corpus")
    engine = engine or default_engine()
    t0 = time.perf_counter()
    rows = [SweepRow(c, evaluate(corpus, c, engine)) for c in all_configs()]
    full = next(r for r in rows if r.config == SweepConfig(Mode.CONTEXTUAL, ALL_ENTITIES, RECOMMENDED_MIN_SCORE))
    top3_cfg = SweepConfig(Mode.CONTEXTUAL, TOP3, RECOMMENDED_MIN_SCORE)
    top3 = SweepRow(top3_cfg, evaluate(corpus, top3_cfg, engine), derived=True)
    latency = {}
    if with_latency:
        texts = latency_texts(corpus)
        latency[Mode.PATTERN.value] = measure_latency(engine, DetectorConfig(Mode.PATTERN, ALL_ENTITIES, PATTERN_MIN_SCORE), texts)
        latency[Mode.CONTEXTUAL.value] = measure_latency(engine, DetectorConfig(Mode.CONTEXTUAL, ALL_ENTITIES, RECOMMENDED_MIN_SCORE), texts)
    return SweepReport(
        rows=rows, top3=top3, top3_ratio=top3_ratio(top3.metrics, full.metrics), latency=latency,
        n_samples=len(corpus), n_gold=sum(len(s.labels) for s in corpus),
        elapsed_s=time.perf_counter() - t0,
    )
