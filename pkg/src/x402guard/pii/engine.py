from __future__ import annotations

from typing import Iterable, Sequence

from .recognisers import Recogniser, contextual_recognisers, pattern_recognisers
from .types import Detection, DetectorConfig, EntityType, Mode, RedactionResult


class SpanError(ValueError):
    """A detection does not fit the text it is supposed to redact."""


def _preference(d: Detection) -> tuple[int, float, int]:
    return (-d.width, -d.score, d.start)


def resolve_overlaps(detections: Iterable[Detection]) -> list[Detection]:
    """Keep the widest of each overlapping group (then higher score, then
    earlier start). A kept span inherits the max score of what it absorbs.
    Returned sorted by start."""
    kept: list[Detection] = []
    for cand in sorted(detections, key=_preference):
        for i, k in enumerate(kept):
            if k.overlaps(cand):
                if cand.score > k.score:
                    kept[i] = Detection(k.start, k.end, k.entity_type, cand.score, k.recogniser_id)
                break
        else:
            kept.append(cand)
    return sorted(kept)


class PiiEngine:
    """Runs recognisers for a DetectorConfig. Immutable once built."""

    def __init__(self, contextual: Sequence[Recogniser] | None = None) -> None:
        self._pattern: tuple[Recogniser, ...] = tuple(pattern_recognisers())
        self._contextual: tuple[Recogniser, ...] = tuple(
            contextual_recognisers() if contextual is None else contextual
        )

    def recognisers(self, mode: Mode) -> tuple[Recogniser, ...]:
        if mode is Mode.PATTERN:
            return self._pattern
        return self._pattern + self._contextual

    def analyze(self, text: str, config: DetectorConfig) -> list[Detection]:
        if not text:
            return []
        by_type: dict[EntityType, list[Detection]] = {}
        for rec in self.recognisers(config.mode):
            if rec.entity_type not in config.entities:
                continue
            if config.mode is Mode.PATTERN and rec.entity_type is EntityType.PERSON:
                continue
            by_type.setdefault(rec.entity_type, []).extend(rec.analyze(text))
        # merge before thresholding, so a higher min_score can only remove spans
        out = [
            d
            for found in by_type.values()
            for d in resolve_overlaps(found)
            if d.score >= config.min_score
        ]
        return sorted(out)

    def redact(self, text: str, detections: Sequence[Detection]) -> RedactionResult:
        return redact(text, detections)

    def scrub(self, text: str, config: DetectorConfig) -> RedactionResult:
        """analyze, resolve cross-type overlaps, redact."""
        return redact(text, resolve_overlaps(self.analyze(text, config)))


def redact(text: str, detections: Sequence[Detection]) -> RedactionResult:
    ordered = sorted(detections)
    pieces: list[str] = []
    cursor = 0
    for d in ordered:
        if d.end > len(text):
            raise SpanError(f"span [{d.start}, {d.end}) outside text of length {len(text)}")
        if d.start < cursor:
            raise SpanError(f"span [{d.start}, {d.end}) overlaps a previous span")
        pieces.append(text[cursor:d.start])
        pieces.append(d.entity_type.placeholder)
        cursor = d.end
    pieces.append(text[cursor:])
    return RedactionResult("".join(pieces), tuple(ordered))


_default_engine: PiiEngine | None = None


def default_engine() -> PiiEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = PiiEngine()
    return _default_engine


def analyze(text: str, config: DetectorConfig) -> list[Detection]:
    return default_engine().analyze(text, config)
