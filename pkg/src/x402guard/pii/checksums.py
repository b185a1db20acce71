"""Checksum validators used to promote pattern matches from 0.85 to 1.0."""
from __future__ import annotations

import re

_IBAN_SHAPE = re.compile(r"[A-Z]{2}[0-9]{2}[A-Z0-9]{11,30}")


def luhn_valid(digits: str) -> bool:
    if not (digits.isascii() and digits.isdigit()):
        raise ValueError("luhn_valid expects ASCII digits only")
    if not 13 <= len(digits) <= 19:
        raise ValueError(f"card numbers are 13-19 digits, got {len(digits)}")
    total = 0
    for i, ch in enumerate(reversed(digits)):
        d = ord(ch) - 48
        if i % 2 == 1:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return total % 10 == 0


def iban_valid(candidate: str) -> bool:
    """ISO 13616 mod-97 check. Spaces are ignored; anything off-shape is False."""
    compact = candidate.replace(" ", "")
    if not _IBAN_SHAPE.fullmatch(compact):
        return False
    rearranged = compact[4:] + compact[:4]
    # piecewise mod keeps the intermediate small; A=10 .. Z=35
    remainder = 0
    for ch in rearranged:
        chunk = str(int(ch, 36))
        for d in chunk:
            remainder = (remainder * 10 + ord(d) - 48) % 97
    return remainder == 1


def ssn_plausible(area: str, group: str, serial: str) -> bool:
    """SSA allocation rules: no 000/666/9xx area, no 00 group, no 0000 serial."""
    if area in ("000", "666") or area.startswith("9"):
        return False
    return group != "00" and serial != "0000"
