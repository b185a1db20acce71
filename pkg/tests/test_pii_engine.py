import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x402guard.pii import (
    ALL_ENTITIES,
    Detection,
    DetectorConfig,
    EntityType as E,
    Mode,
    PiiEngine,
    SpanError,
    redact,
    resolve_overlaps,
)

PATTERN_ALL = DetectorConfig(Mode.PATTERN, ALL_ENTITIES, 0.4)
CONTEXTUAL_ALL = DetectorConfig(Mode.CONTEXTUAL, ALL_ENTITIES, 0.4)


def spans(text, dets):
    return [(text[d.start:d.end], d.entity_type) for d in dets]


def test_medical_reason_field_pattern_mode(engine):
    text = "user=alice.martin@corp.io; ref=312-45-6789"
    assert spans(text, engine.analyze(text, PATTERN_ALL)) == [
        ("alice.martin@corp.io", E.EMAIL_ADDRESS),
        ("312-45-6789", E.US_SSN),
    ]


def test_empty_text(engine):
    assert engine.analyze("", PATTERN_ALL) == []


def test_compact_phone_sits_below_half(engine):
    only_phone = frozenset({E.PHONE_NUMBER})
    text = "call +14155550182"
    assert engine.analyze(text, DetectorConfig(Mode.CONTEXTUAL, only_phone, 0.5)) == []
    (hit,) = engine.analyze(text, DetectorConfig(Mode.CONTEXTUAL, only_phone, 0.4))
    assert hit.score == 0.45 and text[hit.start:hit.end] == "+14155550182"
    assert engine.analyze(text, DetectorConfig(Mode.PATTERN, only_phone, 0.0)) == []


@pytest.mark.parametrize("text,value,entity,score", [
    ("mail bob@example.com now", "bob@example.com", E.EMAIL_ADDRESS, 0.85),
    ("/u/alice%40example.com/x", "alice%40example.com", E.EMAIL_ADDRESS, 0.85),
    ("tel 415-555-0182", "415-555-0182", E.PHONE_NUMBER, 0.85),
    ("tel (415) 555-0182", "(415) 555-0182", E.PHONE_NUMBER, 0.85),
    ("tel 415.555.0182", "415.555.0182", E.PHONE_NUMBER, 0.85),
    ("ssn 312-45-6789", "312-45-6789", E.US_SSN, 1.0),
    ("ssn 312456789", "312456789", E.US_SSN, 0.85),
    ("card 4111111111111111", "4111111111111111", E.CREDIT_CARD, 1.0),
    ("card 4111111111111112", "4111111111111112", E.CREDIT_CARD, 0.85),
    ("iban GB82WEST12345698765432", "GB82WEST12345698765432", E.IBAN_CODE, 1.0),
    ("iban GB82WEST12345698765431", "GB82WEST12345698765431", E.IBAN_CODE, 0.85),
])
def test_pattern_recognisers(engine, text, value, entity, score):
    (hit,) = engine.analyze(text, PATTERN_ALL)
    assert (text[hit.start:hit.end], hit.entity_type, hit.score) == (value, entity, score)


def test_implausible_compact_ssn_is_not_reported(engine):
    assert engine.analyze("id 000456789", PATTERN_ALL) == []


def test_pattern_mode_never_reports_person(engine):
    assert engine.analyze("Export medical records for Alice Martin", PATTERN_ALL) == []


def test_contextual_person_bigram(engine):
    text = "Export medical records for Alice Martin"
    assert spans(text, engine.analyze(text, CONTEXTUAL_ALL)) == [("Alice Martin", E.PERSON)]


def test_slug_names_are_not_people(engine):
    for text in ("https://x.io/profile/john-smith", "https://x.io/u/maria_garcia/items"):
        assert engine.analyze(text, CONTEXTUAL_ALL) == []


def test_dotted_handle_person(engine):
    text = "https://api.medrecords.io/patient/alice.martin"
    (hit,) = engine.analyze(text, CONTEXTUAL_ALL)
    assert text[hit.start:hit.end] == "alice.martin" and hit.entity_type is E.PERSON
    # but the local part of an address belongs to the email, not to a person
    email = "alice.martin@corp.io"
    assert [d.entity_type for d in engine.analyze(email, CONTEXTUAL_ALL)] == [E.EMAIL_ADDRESS]


def test_entity_subset_filters(engine):
    text = "user=alice.martin@corp.io; ref=312-45-6789"
    only_ssn = DetectorConfig(Mode.PATTERN, frozenset({E.US_SSN}), 0.4)
    assert [d.entity_type for d in engine.analyze(text, only_ssn)] == [E.US_SSN]


def test_empty_entity_subset_rejected():
    with pytest.raises(ValueError):
        DetectorConfig(Mode.PATTERN, frozenset(), 0.4)


def test_redact_description():
    text = "Export medical records for Alice Martin"
    out = redact(text, [Detection(27, 39, E.PERSON, 0.6)])
    assert out.redacted_text == "Export medical records for <PERSON>"
    assert out.redaction_count == 1


def test_redact_nothing():
    out = redact("plain text", [])
    assert out.redacted_text == "plain text" and out.redaction_count == 0


def test_redact_twice_then_reanalyze(engine):
    text = "a@b.co x a@b.co"
    dets = engine.analyze(text, PATTERN_ALL)
    out = redact(text, dets)
    assert out.redacted_text == "<EMAIL_ADDRESS> x <EMAIL_ADDRESS>"
    assert out.redaction_count == 2
    assert engine.analyze(out.redacted_text, CONTEXTUAL_ALL) == []


def test_redact_rejects_bad_spans():
    with pytest.raises(SpanError):
        redact("short", [Detection(2, 10, E.PERSON, 0.6)])
    with pytest.raises(SpanError):
        redact("0123456789", [Detection(0, 5, E.PERSON, 0.6), Detection(3, 8, E.US_SSN, 0.6)])


def test_resolve_overlaps_keeps_widest_and_max_score():
    a = Detection(0, 10, E.PERSON, 0.5)
    b = Detection(2, 6, E.PERSON, 0.9)
    c = Detection(20, 25, E.PERSON, 0.6)
    assert resolve_overlaps([b, c, a]) == [Detection(0, 10, E.PERSON, 0.9), c]


def test_merge_happens_before_threshold():
    class Fixed:
        entity_type = E.PERSON
        recogniser_id = "fixed"

        def __init__(self, det):
            self.det = det

        def analyze(self, text):
            return [self.det]

    eng = PiiEngine(contextual=[Fixed(Detection(0, 10, E.PERSON, 0.45)), Fixed(Detection(2, 5, E.PERSON, 0.8))])
    hits = eng.analyze("x" * 12, DetectorConfig(Mode.CONTEXTUAL, frozenset({E.PERSON}), 0.5))
    assert hits == [Detection(0, 10, E.PERSON, 0.8)]


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet=st.sampled_from(list("0123456789-.@ ()%abcxyzAGBDE+")), max_size=80))
def test_scrubbed_text_has_no_pattern_detections(text):
    eng = PiiEngine()
    out = eng.scrub(text, PATTERN_ALL)
    assert eng.analyze(out.redacted_text, PATTERN_ALL) == []


@settings(max_examples=100, deadline=None)
@given(st.text(max_size=80), st.sampled_from([0.3, 0.4, 0.5, 0.6, 0.7]), st.sampled_from([0.3, 0.4, 0.5, 0.6, 0.7]))
def test_threshold_monotone(text, lo, hi):
    lo, hi = min(lo, hi), max(lo, hi)
    eng = PiiEngine()
    high = set(eng.analyze(text, DetectorConfig(Mode.CONTEXTUAL, ALL_ENTITIES, hi)))
    low = set(eng.analyze(text, DetectorConfig(Mode.CONTEXTUAL, ALL_ENTITIES, lo)))
    assert high <= low


VALUES = st.sampled_from([
    "bob@example.com", "312-45-6789", "4111111111111111", "GB82WEST12345698765432",
    "DE89370400440532013000", "415-555-0182", "(415) 555-0182",
])


@settings(max_examples=150, deadline=None)
@given(st.lists(VALUES, min_size=1, max_size=3), st.sampled_from([" ", "; ", " | ", " id="]))
def test_known_values_never_survive_scrub(values, sep):
    eng = PiiEngine()
    text = "note" + sep + sep.join(values) + sep + "end"
    out = eng.scrub(text, PATTERN_ALL)
    for v in values:
        assert v not in out.redacted_text
