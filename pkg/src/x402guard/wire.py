"""Wire formats shared by the client and the testbed: the 402 body, the
signed payment token, and the X-Payment header."""
from __future__ import annotations

import base64
import hashlib
import hmac
import json
from dataclasses import dataclass
from decimal import Decimal
from typing import Optional, Protocol

from pydantic import BaseModel, ConfigDict, Field, field_serializer

PAYMENT_HEADER = "X-Payment"


class ServerMetadata(BaseModel):
    """Metadata a server asks the agent to put in the token."""

    model_config = ConfigDict(extra="forbid")

    description: Optional[str] = None
    reason: Optional[str] = None


class PaymentSpec(BaseModel):
    model_config = ConfigDict(extra="ignore")

    price_usd: Decimal = Field(gt=0)
    network: str
    facilitator: str
    schemes: list[str] = Field(min_length=1)
    metadata: Optional[ServerMetadata] = None

    @field_serializer("price_usd")
    def _price(self, v: Decimal) -> str:
        return format(v, "f")

    def to_body(self) -> bytes:
        return self.model_dump_json(exclude_none=True).encode("utf-8")

    @classmethod
    def from_body(cls, body: bytes) -> "PaymentSpec":
        return cls.model_validate_json(body)


def amount_str(amount: Decimal) -> str:
    return format(amount.normalize(), "f")


@dataclass(frozen=True)
class PaymentToken:
    resource_url: str
    description: str
    reason: str
    amount_usd: Decimal
    payer_id: str
    network: str
    signature: bytes = b""

    def fields(self) -> dict[str, str]:
        return {
            "resource_url": self.resource_url,
            "description": self.description,
            "reason": self.reason,
            "amount_usd": amount_str(self.amount_usd),
            "payer_id": self.payer_id,
            "network": self.network,
        }

    def signing_bytes(self) -> bytes:
        return json.dumps(self.fields(), ensure_ascii=False, separators=(",", ":")).encode("utf-8")

    def to_bytes(self) -> bytes:
        obj = {**self.fields(), "signature": self.signature.hex()}
        return json.dumps(obj, ensure_ascii=False, separators=(",", ":")).encode("utf-8")

    @classmethod
    def from_bytes(cls, data: bytes) -> "PaymentToken":
        obj = json.loads(data.decode("utf-8"))
        if not isinstance(obj, dict):
            raise ValueError("token is not an object")
        return cls(
            resource_url=obj["resource_url"],
            description=obj["description"],
            reason=obj["reason"],
            amount_usd=Decimal(obj["amount_usd"]),
            payer_id=obj["payer_id"],
            network=obj["network"],
            signature=bytes.fromhex(obj["signature"]),
        )


class Signer(Protocol):
    def sign(self, message: bytes) -> bytes: ...


class HmacSigner:
    """Local stand-in for typed-data wallet signing: HMAC-SHA256 over the token bytes."""

    def __init__(self, key: bytes) -> None:
        if not key:
            raise ValueError("signing key must be nonempty")
        self._key = key

    def sign(self, message: bytes) -> bytes:
        return hmac.new(self._key, message, hashlib.sha256).digest()

    def verify(self, message: bytes, signature: bytes) -> bool:
        return hmac.compare_digest(self.sign(message), signature)


def encode_receipt(receipt: bytes) -> str:
    return base64.b64encode(receipt).decode("ascii")


def decode_receipt(header: str) -> bytes:
    return base64.b64decode(header.encode("ascii"), validate=True)
