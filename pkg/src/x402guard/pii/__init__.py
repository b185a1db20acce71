from .checksums import iban_valid, luhn_valid, ssn_plausible
from .engine import PiiEngine, SpanError, analyze, default_engine, redact, resolve_overlaps
from .types import ALL_ENTITIES, Detection, DetectorConfig, EntityType, Mode, RedactionResult

__all__ = [
    "ALL_ENTITIES",
    "Detection",
    "DetectorConfig",
    "EntityType",
    "Mode",
    "PiiEngine",
    "RedactionResult",
    "SpanError",
    "analyze",
    "default_engine",
    "iban_valid",
    "luhn_valid",
    "redact",
    "resolve_overlaps",
    "ssn_plausible",
]
