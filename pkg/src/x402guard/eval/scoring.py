"""Partial-span scoring: a prediction counts if it overlaps a gold label of
the same entity type by at least one character; matching is one-to-one."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol, Sequence

from ..pii import EntityType


class Span(Protocol):
    start: int
    end: int
    entity_type: EntityType


def _overlap(a: Span, b: Span) -> int:
    return min(a.end, b.end) - max(a.start, b.start)


def match_spans(predictions: Sequence[Span], gold: Sequence[Span], field: str | None = None) -> tuple[int, int, int]:
    """Return (tp, fp, fn) for spans confined to one field of one sample.

    Greedy sweep by right endpoint: the interval that ends first (either side)
    is paired with the unmatched partner of the other side that overlaps it
    and itself ends first; ties go to the larger overlap, then the earlier
    start. On interval-overlap graphs this yields a maximum matching, so the
    counts agree with an exhaustive search.
    """
    tp = 0
    types = {p.entity_type for p in predictions} | {g.entity_type for g in gold}
    for et in types:
        tp += _match_one_type([p for p in predictions if p.entity_type == et],
                              [g for g in gold if g.entity_type == et])
    return tp, len(predictions) - tp, len(gold) - tp


def _match_one_type(preds: list[Span], golds: list[Span]) -> int:
    items = [(s.end, s.start, 0, i) for i, s in enumerate(preds)] + [(s.end, s.start, 1, i) for i, s in enumerate(golds)]
    items.sort()
    sides = (preds, golds)
    used = (set(), set())
    matched = 0
    for _end, _start, side, i in items:
        if i in used[side]:
            continue
        me = sides[side][i]
        other = 1 - side
        best = None
        for j, cand in enumerate(sides[other]):
            if j in used[other] or _overlap(me, cand) <= 0:
                continue
            key = (cand.end, -_overlap(me, cand), cand.start)
            if best is None or key < best[0]:
                best = (key, j)
        if best is not None:
            used[side].add(i)
            used[other].add(best[1])
            matched += 1
    return matched


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def f1_score(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if (p + r) else 0.0


@dataclass
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def add(self, tp: int, fp: int, fn: int) -> None:
        self.tp += tp
        self.fp += fp
        self.fn += fn

    @property
    def precision(self) -> float:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def recall(self) -> float:
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def f1(self) -> float:
        return f1_score(self.precision, self.recall)

    @property
    def degenerate(self) -> bool:
        """No gold labels: recall is 0 by convention, not by measurement."""
        return self.tp + self.fn == 0

    def as_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "precision": self.precision,
                "recall": self.recall, "f1": self.f1, "degenerate": self.degenerate}


@dataclass
class EvalMetrics:
    per_entity: dict[EntityType, Counts] = field(default_factory=dict)

    @classmethod
    def for_entities(cls, entities: Iterable[EntityType]) -> "EvalMetrics":
        return cls({e: Counts() for e in sorted(entities, key=list(EntityType).index)})

    @property
    def micro(self) -> Counts:
        pooled = Counts()
        for c in self.per_entity.values():
            pooled.add(c.tp, c.fp, c.fn)
        return pooled

    @property
    def micro_p(self) -> float:
        return self.micro.precision

    @property
    def micro_r(self) -> float:
        return self.micro.recall

    @property
    def micro_f1(self) -> float:
        return self.micro.f1

    @property
    def n_gold(self) -> int:
        return self.micro.tp + self.micro.fn

    @property
    def degenerate(self) -> bool:
        return self.n_gold == 0

    def as_dict(self) -> dict:
        m = self.micro
        return {
            "per_entity": {e.value: c.as_dict() for e, c in self.per_entity.items()},
            "micro": m.as_dict(),
            "n_gold": self.n_gold,
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "EvalMetrics":
        return cls({EntityType(k): Counts(v["tp"], v["fp"], v["fn"]) for k, v in obj["per_entity"].items()})
