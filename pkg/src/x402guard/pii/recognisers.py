"""Pattern and contextual recognisers.

Pattern recognisers emit 0.85, or 1.0 when a checksum validator passes.
Contextual recognisers are heuristic stand-ins for an NER model; they add
person names in running text and the compact international phone form.
"""
from __future__ import annotations

import re
from typing import Iterator, Protocol

from .checksums import iban_valid, luhn_valid, ssn_plausible
from .names import FIRST_NAMES, FIRST_NAMES_LOWER, SURNAMES_LOWER
from .types import Detection, EntityType

PATTERN_SCORE = 0.85
VALIDATED_SCORE = 1.0

# digit runs must not continue across the match edges
_L = r"(?<![A-Za-z0-9+])(?<![0-9][-.])"
_R = r"(?![A-Za-z0-9])(?![-.][0-9])"

IBAN_COUNTRIES = frozenset(
    "AD AE AL AT AZ BA BE BG BH BR BY CH CR CY CZ DE DK DO EE EG ES FI FO FR GB GE "
    "GI GL GR GT HR HU IE IL IQ IS IT JO KW KZ LB LC LI LT LU LV MC MD ME MK MR MT "
    "MU NL NO PK PL PS PT QA RO RS SA SC SE SI SK SM ST SV TL TN TR UA VA VG XK".split()
)


class Recogniser(Protocol):
    recogniser_id: str
    entity_type: EntityType

    def analyze(self, text: str) -> list[Detection]: ...


class _RegexRecogniser:
    recogniser_id = ""
    entity_type: EntityType
    pattern: re.Pattern[str]

    def analyze(self, text: str) -> list[Detection]:
        out = []
        for m in self.pattern.finditer(text):
            score = self.score(m)
            if score is not None:
                out.append(Detection(m.start(), m.end(), self.entity_type, score, self.recogniser_id))
        return out

    def score(self, m: re.Match[str]) -> float | None:
        return PATTERN_SCORE


class EmailRecogniser(_RegexRecogniser):
    """Bare, query-parameter and %40-encoded addresses.

    ``%40`` is decoded before matching; spans map back to the original text.
    """

    recogniser_id = "email_pattern"
    entity_type = EntityType.EMAIL_ADDRESS
    pattern = re.compile(
        r"(?<![A-Za-z0-9._%+-])"
        r"[A-Za-z0-9][A-Za-z0-9._%+-]*"
        r"@"
        r"[A-Za-z0-9](?:[A-Za-z0-9-]*[A-Za-z0-9])?"
        r"(?:\.[A-Za-z0-9](?:[A-Za-z0-9-]*[A-Za-z0-9])?)*"
        r"\.[A-Za-z]{2,}"
        r"(?![A-Za-z0-9-])"
    )

    def analyze(self, text: str) -> list[Detection]:
        if "%40" not in text:
            return super().analyze(text)
        decoded, starts, ends = _decode_at_escapes(text)
        return [
            Detection(starts[d.start], ends[d.end - 1], d.entity_type, d.score, d.recogniser_id)
            for d in super().analyze(decoded)
        ]


def _decode_at_escapes(text: str) -> tuple[str, list[int], list[int]]:
    chars: list[str] = []
    starts: list[int] = []
    ends: list[int] = []
    i = 0
    while i < len(text):
        if text.startswith("%40", i):
            chars.append("@")
            starts.append(i)
            ends.append(i + 3)
            i += 3
        else:
            chars.append(text[i])
            starts.append(i)
            ends.append(i + 1)
            i += 1
    return "".join(chars), starts, ends


class UsPhoneRecogniser(_RegexRecogniser):
    """Delimited US numbers only: 415-555-0182, 415.555.0182, (415) 555-0182."""

    recogniser_id = "phone_us_pattern"
    entity_type = EntityType.PHONE_NUMBER
    pattern = re.compile(
        r"(?<![A-Za-z0-9+(])(?<![0-9][-.])"
        r"(?:\([0-9]{3}\) ?[0-9]{3}-[0-9]{4}|[0-9]{3}-[0-9]{3}-[0-9]{4}|[0-9]{3}\.[0-9]{3}\.[0-9]{4})"
        + _R
    )


class SsnRecogniser(_RegexRecogniser):
    recogniser_id = "ssn_pattern"
    entity_type = EntityType.US_SSN
    pattern = re.compile(_L + r"([0-9]{3})(-?)([0-9]{2})\2([0-9]{4})" + _R)

    def score(self, m: re.Match[str]) -> float | None:
        plausible = ssn_plausible(m.group(1), m.group(3), m.group(4))
        if m.group(2):
            return VALIDATED_SCORE if plausible else PATTERN_SCORE
        # undelimited nine digits are too common to accept without the prefix rules
        return PATTERN_SCORE if plausible else None


class CreditCardRecogniser(_RegexRecogniser):
    recogniser_id = "credit_card_pattern"
    entity_type = EntityType.CREDIT_CARD
    pattern = re.compile(
        _L + r"(?:[2-6][0-9]{12,18}|[2-6][0-9]{3}([ -])[0-9]{4}\1[0-9]{4}\1[0-9]{1,7})" + _R
    )

    def score(self, m: re.Match[str]) -> float | None:
        digits = re.sub(r"[ -]", "", m.group(0))
        if not 13 <= len(digits) <= 19:
            return None
        return VALIDATED_SCORE if luhn_valid(digits) else PATTERN_SCORE


class IbanRecogniser(_RegexRecogniser):
    recogniser_id = "iban_pattern"
    entity_type = EntityType.IBAN_CODE
    pattern = re.compile(
        r"(?<![A-Za-z0-9])"
        r"([A-Z]{2})[0-9]{2}(?:[A-Z0-9]{11,30}|(?: [A-Z0-9]{4}){2,7}(?: [A-Z0-9]{1,3})?)"
        r"(?![A-Za-z0-9])"
    )

    def score(self, m: re.Match[str]) -> float | None:
        if m.group(1) not in IBAN_COUNTRIES:
            return None
        return VALIDATED_SCORE if iban_valid(m.group(0)) else PATTERN_SCORE


def pattern_recognisers() -> list[Recogniser]:
    return [
        EmailRecogniser(),
        UsPhoneRecogniser(),
        SsnRecogniser(),
        CreditCardRecogniser(),
        IbanRecogniser(),
    ]


# --- contextual -------------------------------------------------------------

class PersonBigramRecogniser:
    """Capitalised ``First Last`` in running text, gated by the first-name lexicon.

    Slugs, underscores and initials carry no capitalised context and are
    deliberately not matched.
    """

    recogniser_id = "person_bigram"
    entity_type = EntityType.PERSON
    score = 0.6
    _pattern = re.compile(r"(?<![A-Za-z0-9_.\-])(?=([A-Z][a-z]+) ([A-Z][a-z]+(?:-[A-Z][a-z]+)?)(?![A-Za-z0-9_]))")

    def __init__(self, first_names: frozenset[str] = FIRST_NAMES) -> None:
        self.first_names = first_names

    def analyze(self, text: str) -> list[Detection]:
        out = []
        for m in self._pattern.finditer(text):
            if m.group(1) in self.first_names:
                start = m.start(1)
                out.append(Detection(start, m.end(2), self.entity_type, self.score, self.recogniser_id))
        return out


class DottedHandleRecogniser:
    """Lower-case ``first.last`` handles (e.g. a path segment), when both halves are known names."""

    recogniser_id = "person_dotted_handle"
    entity_type = EntityType.PERSON
    score = 0.5
    _pattern = re.compile(
        r"(?<![A-Za-z0-9._%+\-])([a-z]{2,})\.([a-z]{2,})(?![A-Za-z0-9_\-@]|%40|\.[A-Za-z0-9])"
    )

    def analyze(self, text: str) -> list[Detection]:
        return [
            Detection(m.start(), m.end(), self.entity_type, self.score, self.recogniser_id)
            for m in self._pattern.finditer(text)
            if m.group(1) in FIRST_NAMES_LOWER and m.group(2) in SURNAMES_LOWER
        ]


class CompactPhoneRecogniser(_RegexRecogniser):
    """``+`` followed by 10-14 digits. Low confidence: no delimiters to anchor on."""

    recogniser_id = "phone_compact_intl"
    entity_type = EntityType.PHONE_NUMBER
    pattern = re.compile(r"(?<![A-Za-z0-9+])\+[0-9]{10,14}(?![0-9])")

    def score(self, m: re.Match[str]) -> float | None:
        return 0.45


def contextual_recognisers() -> list[Recogniser]:
    return [PersonBigramRecogniser(), DottedHandleRecogniser(), CompactPhoneRecogniser()]


def iter_entities(recognisers: list[Recogniser], wanted: frozenset[EntityType]) -> Iterator[Recogniser]:
    return (r for r in recognisers if r.entity_type in wanted)
