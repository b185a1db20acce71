"""Entity value pools and surface-form renderers."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from ..pii import EntityType

URL, DESC, REASON = "resource_url", "description", "reason"
FIELDS = (URL, DESC, REASON)
ANY = FIELDS

EMAILS = (
    "alice@example.com",
    "alice.martin@example.com",
    "j.smith@mail.example.org",
    "maria.garcia@corp.example",
    "wei.chen@example.net",
    "lars.e@example.com",
    "aisha.patel@health.example.com",
)
FULL_NAMES = ("John Smith", "Maria Garcia", "Wei Chen", "Aisha Patel", "Lars Eriksson")
PHONES = (("415", "555", "0182"), ("212", "555", "0147"), ("646", "555", "0199"), ("312", "555", "0123"))
SSNS = (("312", "45", "6789"), ("219", "09", "9999"), ("078", "05", "1120"), ("457", "55", "5462"), ("523", "11", "8432"))
VISA = ("4111111111111111", "4012888888881881", "4242424242424242")
MASTERCARD = ("5555555555554444", "5105105105105100", "5454545454545454")
IBAN_DE = ("DE89370400440532013000", "DE75512108001245126199")
IBAN_GB = ("GB82WEST12345698765432", "GB33BUKB20201555555555")


@dataclass(frozen=True)
class SurfaceForm:
    form_id: str
    entity: EntityType
    render: Callable[[random.Random], str]
    fields: tuple[str, ...] = ANY
    prefix: str = ""  # context written before the value, outside the label span


def _pick(pool):
    return lambda rng: rng.choice(pool)


def _const(value: str):
    return lambda rng: value


def _phone(fmt: str):
    return lambda rng: fmt.format(*rng.choice(PHONES))


def _surface_forms() -> dict[EntityType, tuple[SurfaceForm, ...]]:
    E, P = EntityType.EMAIL_ADDRESS, EntityType.PERSON
    return {
        E: (
            SurfaceForm("email_bare", E, _pick(EMAILS)),
            SurfaceForm("email_urlencoded", E, lambda rng: rng.choice(EMAILS).replace("@", "%40"), (URL,)),
            SurfaceForm("email_query_param", E, _pick(EMAILS), (URL, REASON), prefix="email="),
        ),
        P: (
            SurfaceForm("person_full_john_smith", P, _const("John Smith"), (DESC, REASON)),
            SurfaceForm("person_full_maria_garcia", P, _const("Maria Garcia"), (DESC, REASON)),
            SurfaceForm("person_full_wei_chen", P, _const("Wei Chen"), (DESC, REASON)),
            SurfaceForm("person_full_aisha_patel", P, _const("Aisha Patel"), (DESC, REASON)),
            SurfaceForm("person_full_lars_eriksson", P, _const("Lars Eriksson"), (DESC, REASON)),
            SurfaceForm("person_slug_john_smith", P, _const("john-smith"), (URL, REASON)),
            SurfaceForm("person_slug_maria_garcia", P, _const("maria-garcia"), (URL, REASON)),
            SurfaceForm("person_underscore", P, _const("john_smith"), (URL, REASON)),
            SurfaceForm("person_abbreviated", P, _const("J.Smith"), (URL, REASON)),
            SurfaceForm("person_last_first", P, _const("Garcia,Maria"), (URL, REASON)),
            SurfaceForm("person_first_only", P, _const("Aisha")),
        ),
        EntityType.PHONE_NUMBER: (
            SurfaceForm("phone_us_dashed", EntityType.PHONE_NUMBER, _phone("{}-{}-{}")),
            SurfaceForm("phone_us_parenthesised", EntityType.PHONE_NUMBER, _phone("({}) {}-{}"), (DESC, REASON)),
            SurfaceForm("phone_us_dotted", EntityType.PHONE_NUMBER, _phone("{}.{}.{}")),
            SurfaceForm("phone_intl_compact", EntityType.PHONE_NUMBER, _phone("+1{}{}{}")),
        ),
        EntityType.US_SSN: (
            SurfaceForm("ssn_dashed", EntityType.US_SSN, lambda rng: "-".join(rng.choice(SSNS))),
            SurfaceForm("ssn_compact", EntityType.US_SSN, lambda rng: "".join(rng.choice(SSNS))),
        ),
        EntityType.CREDIT_CARD: (
            SurfaceForm("cc_visa_bare", EntityType.CREDIT_CARD, _pick(VISA)),
            SurfaceForm("cc_mastercard_bare", EntityType.CREDIT_CARD, _pick(MASTERCARD)),
        ),
        EntityType.IBAN_CODE: (
            SurfaceForm("iban_de", EntityType.IBAN_CODE, _pick(IBAN_DE)),
            SurfaceForm("iban_gb", EntityType.IBAN_CODE, _pick(IBAN_GB)),
        ),
    }


SURFACE_FORMS = _surface_forms()
FORMS_BY_ID = {f.form_id: f for forms in SURFACE_FORMS.values() for f in forms}
COMPACT_PHONE_FORM = "phone_intl_compact"


def surface_forms(entity: EntityType) -> list[tuple[str, Callable[[random.Random], str]]]:
    return [(f.form_id, f.render) for f in SURFACE_FORMS[EntityType(entity)]]
