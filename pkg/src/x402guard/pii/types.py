from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class EntityType(str, Enum):
    EMAIL_ADDRESS = "EMAIL_ADDRESS"
    PERSON = "PERSON"
    PHONE_NUMBER = "PHONE_NUMBER"
    US_SSN = "US_SSN"
    CREDIT_CARD = "CREDIT_CARD"
    IBAN_CODE = "IBAN_CODE"

    @property
    def placeholder(self) -> str:
        return f"<{self.value}>"


ALL_ENTITIES: frozenset[EntityType] = frozenset(EntityType)


class Mode(str, Enum):
    PATTERN = "PATTERN"
    CONTEXTUAL = "CONTEXTUAL"


@dataclass(frozen=True, order=True)
class Detection:
    start: int
    end: int
    entity_type: EntityType
    score: float
    recogniser_id: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"bad span [{self.start}, {self.end})")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score out of range: {self.score}")

    def overlaps(self, other: "Detection") -> bool:
        return self.start < other.end and other.start < self.end

    @property
    def width(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class DetectorConfig:
    mode: Mode = Mode.CONTEXTUAL
    entities: frozenset[EntityType] = ALL_ENTITIES
    min_score: float = 0.4

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "entities", frozenset(EntityType(e) for e in self.entities))
        if not self.entities:
            raise ValueError("entities must be nonempty")
        if not 0.0 <= self.min_score <= 1.0:
            raise ValueError(f"min_score out of range: {self.min_score}")


@dataclass(frozen=True)
class RedactionResult:
    redacted_text: str
    detections_applied: tuple[Detection, ...]

    @property
    def redaction_count(self) -> int:
        return len(self.detections_applied)
