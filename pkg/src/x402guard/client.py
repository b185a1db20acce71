"""Hardened 402 payment client.

Every outbound payment passes PII filter -> policy -> replay guard -> audit
before anything is signed or sent.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from decimal import Decimal
from enum import Enum
from typing import Callable, Mapping, Protocol

import httpx
from pydantic import ValidationError

from .audit import AuditError, AuditLog, Outcome
from .pii import DetectorConfig, EntityType, PiiEngine, default_engine
from .policy import PolicyEngine, PolicyViolationError, SpendRecord, normalize_host
from .replay import ReplayDetectedError, ReplayGuard
from .wire import PAYMENT_HEADER, PaymentSpec, PaymentToken, Signer, amount_str, encode_receipt

logger = logging.getLogger(__name__)

WITHHELD_URL = "<WITHHELD>"
RECOMMENDED_DETECTOR = DetectorConfig()


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class MetadataTriple:
    resource_url: str
    description: str = ""
    reason: str = ""

    def as_dict(self) -> dict[str, str]:
        return {"resource_url": self.resource_url, "description": self.description, "reason": self.reason}


class PaymentStatus(str, Enum):
    PAID = "PAID"
    BLOCKED_PII_ERROR = "BLOCKED_PII_ERROR"
    BLOCKED_POLICY = "BLOCKED_POLICY"
    BLOCKED_REPLAY = "BLOCKED_REPLAY"
    ERROR = "ERROR"


@dataclass(frozen=True)
class PipelineOutcome:
    status: PaymentStatus
    receipt: bytes | None = None
    redactions: int = 0  # metadata fields altered by the filter
    entities: tuple[EntityType, ...] = ()
    detail: str = ""

    def __post_init__(self) -> None:
        if self.status is PaymentStatus.PAID and self.receipt is None:
            raise ValueError("PAID outcome needs a receipt")


@dataclass
class HttpResponse:
    status_code: int
    body: bytes = b""
    headers: dict[str, str] = field(default_factory=dict)


@dataclass
class PaymentResponse:
    """What ``request`` returns: the final HTTP response plus, when a payment
    was negotiated, the pipeline outcome."""

    status_code: int
    body: bytes
    outcome: PipelineOutcome | None = None

    @property
    def ok(self) -> bool:
        return 200 <= self.status_code < 300 and (self.outcome is None or self.outcome.status is PaymentStatus.PAID)


class HttpTransport(Protocol):
    def get(self, url: str, headers: Mapping[str, str]) -> HttpResponse: ...


class Facilitator(Protocol):
    def settle(self, token: bytes) -> bytes: ...


class PaymentBlocked(Exception):
    status = PaymentStatus.ERROR


class PIIBlockedError(PaymentBlocked):
    status = PaymentStatus.BLOCKED_PII_ERROR


class HttpxTransport:
    def __init__(self, client: httpx.Client) -> None:
        self.client = client

    def get(self, url: str, headers: Mapping[str, str]) -> HttpResponse:
        r = self.client.get(url, headers=dict(headers))
        return HttpResponse(r.status_code, r.content, dict(r.headers))


class HttpFacilitator:
    """POSTs the serialized token; the response body is the receipt."""

    def __init__(self, client: httpx.Client, url: str) -> None:
        self.client = client
        self.url = url

    def settle(self, token: bytes) -> bytes:
        r = self.client.post(self.url, content=token, headers={"content-type": "application/json"})
        r.raise_for_status()
        return r.content


@dataclass(frozen=True)
class Intercepted:
    triple: MetadataTriple
    spend: SpendRecord
    fingerprint: bytes | None
    redactions: int
    entities: tuple[EntityType, ...]


class HardenedClient:
    """Drop-in replacement for PlainClient with the four controls wired in."""

    def __init__(
        self,
        transport: HttpTransport,
        facilitator: Facilitator,
        *,
        signer: Signer,
        policy: PolicyEngine,
        replay: ReplayGuard,
        audit: AuditLog,
        detector: DetectorConfig = RECOMMENDED_DETECTOR,
        engine: PiiEngine | None = None,
        agent_id: str = "agent",
        payer_id: str = "payer",
        clock: Callable[[], datetime] = utcnow,
        pii_filter: bool = True,
        replay_guard: bool = True,
        max_negotiations: int = 2,
    ) -> None:
        self.transport = transport
        self.facilitator = facilitator
        self.signer = signer
        self.policy = policy
        self.replay = replay
        self.audit = audit
        self.detector = detector
        self.engine = engine or default_engine()
        self.agent_id = agent_id
        self.payer_id = payer_id
        self.clock = clock
        self.pii_filter = pii_filter
        self.replay_guard = replay_guard
        self.max_negotiations = max_negotiations

    # -- controls ----------------------------------------------------------

    def _scrub(self, triple: MetadataTriple) -> tuple[MetadataTriple, int, tuple[EntityType, ...]]:
        if not self.pii_filter:
            return triple, 0, ()
        fields = {}
        altered = 0
        found: set[EntityType] = set()
        for name, text in triple.as_dict().items():
            result = self.engine.scrub(text, self.detector)
            fields[name] = result.redacted_text
            if result.redaction_count:
                altered += 1
                found.update(d.entity_type for d in result.detections_applied)
        return MetadataTriple(**fields), altered, tuple(sorted(found, key=lambda e: e.value))

    def _safe_url(self, url: str) -> str:
        try:
            return self._scrub(MetadataTriple(url))[0].resource_url
        except Exception:
            return WITHHELD_URL

    def intercept(self, triple: MetadataTriple, amount: Decimal, host: str, now: datetime,
                  network: str = "") -> Intercepted:
        """Run the controls in order. Emits exactly one audit event; raises on block."""
        try:
            clean, altered, entities = self._scrub(triple)
        except Exception as exc:
            self._emit(now, WITHHELD_URL, Outcome.ERROR, f"pii_filter_error={type(exc).__name__}")
            raise PIIBlockedError(f"PII filter failed: {type(exc).__name__}") from exc

        redacted = "redacted=" + (",".join(e.value for e in entities) or "-")
        amount_note = f"amount_usd={amount_str(amount)}"

        try:
            spend = self.policy.authorize(amount, host, now)
        except PolicyViolationError as exc:
            d = exc.decision
            self._emit(now, clean.resource_url, Outcome.POLICY_BLOCKED,
                       f"dimension={d.violated_dimension.value};aggregate_usd={d.current_aggregate_usd};"
                       f"{amount_note};{redacted}")
            raise

        fp = None
        if self.replay_guard:
            token_fields = {**clean.as_dict(), "amount_usd": amount_str(amount),
                            "payer_id": self.payer_id, "network": network}
            try:
                fp = self.replay.check(token_fields, now)
            except ReplayDetectedError:
                self.policy.release(spend)
                self._emit(now, clean.resource_url, Outcome.REPLAY_BLOCKED, f"{amount_note};{redacted}")
                raise
            except Exception as exc:
                self.policy.release(spend)
                self._emit(now, clean.resource_url, Outcome.ERROR, f"replay_guard_error={type(exc).__name__}")
                raise PaymentBlocked(f"replay guard failed: {type(exc).__name__}") from exc

        outcome = Outcome.PII_REDACTED if altered else Outcome.ALLOWED
        try:
            self.audit.append(now, self.agent_id, clean.resource_url, outcome, f"{amount_note};{redacted}")
        except AuditError:
            self.policy.release(spend)
            raise
        return Intercepted(clean, spend, fp, altered, entities)

    def _emit(self, now: datetime, url: str, outcome: Outcome, detail: str) -> None:
        self.audit.append(now, self.agent_id, url, outcome, detail)

    # -- protocol ----------------------------------------------------------

    def request(self, url: str, description: str = "", reason: str = "") -> PaymentResponse:
        resp = self.transport.get(url, {})
        outcome: PipelineOutcome | None = None
        rounds = 0
        while resp.status_code == 402:
            if rounds == self.max_negotiations:
                return self._fail(url, "server kept demanding payment", resp)
            rounds += 1
            try:
                spec = PaymentSpec.from_body(resp.body)
            except (ValidationError, ValueError) as exc:
                return self._fail(url, f"malformed 402 body: {type(exc).__name__}", resp)

            meta = spec.metadata
            triple = MetadataTriple(
                url,
                meta.description if meta and meta.description is not None else description,
                meta.reason if meta and meta.reason is not None else reason,
            )
            now = self.clock()
            try:
                got = self.intercept(triple, spec.price_usd, normalize_host(url), now, spec.network)
            except PolicyViolationError as exc:
                return self._blocked(PaymentStatus.BLOCKED_POLICY, resp, exc.decision.violated_dimension.value)
            except ReplayDetectedError:
                return self._blocked(PaymentStatus.BLOCKED_REPLAY, resp, "duplicate payment token")
            except PaymentBlocked as exc:
                return self._blocked(exc.status, resp, str(exc))
            except AuditError as exc:
                return self._blocked(PaymentStatus.ERROR, resp, str(exc))

            token = PaymentToken(
                got.triple.resource_url, got.triple.description, got.triple.reason,
                spec.price_usd, self.payer_id, spec.network,
            )
            token = replace(token, signature=self.signer.sign(token.signing_bytes()))
            try:
                receipt = self.facilitator.settle(token.to_bytes())
                resp = self.transport.get(url, {PAYMENT_HEADER: encode_receipt(receipt)})
            except Exception as exc:
                logger.warning("payment transport failed: %s", type(exc).__name__)
                return self._fail(got.triple.resource_url, f"transport_error={type(exc).__name__}", resp, scrubbed=True)
            outcome = PipelineOutcome(PaymentStatus.PAID, receipt, got.redactions, got.entities)

        if outcome is not None and not 200 <= resp.status_code < 300:
            return self._fail(url, f"paid retry answered {resp.status_code}", resp)
        return PaymentResponse(resp.status_code, resp.body, outcome)

    def _blocked(self, status: PaymentStatus, resp: HttpResponse, detail: str) -> PaymentResponse:
        return PaymentResponse(resp.status_code, b"", PipelineOutcome(status, detail=detail))

    def _fail(self, url: str, detail: str, resp: HttpResponse, scrubbed: bool = False) -> PaymentResponse:
        safe = url if scrubbed else self._safe_url(url)
        try:
            self._emit(self.clock(), safe, Outcome.ERROR, detail)
        except AuditError:
            logger.error("could not audit failure: %s", detail)
        return PaymentResponse(resp.status_code, b"", PipelineOutcome(PaymentStatus.ERROR, detail=detail))


class PlainClient:
    """The unprotected flow: signs and sends whatever metadata it is given."""

    def __init__(self, transport: HttpTransport, facilitator: Facilitator, *, signer: Signer,
                 payer_id: str = "payer") -> None:
        self.transport = transport
        self.facilitator = facilitator
        self.signer = signer
        self.payer_id = payer_id

    def request(self, url: str, description: str = "", reason: str = "") -> PaymentResponse:
        resp = self.transport.get(url, {})
        if resp.status_code != 402:
            return PaymentResponse(resp.status_code, resp.body)
        spec = PaymentSpec.from_body(resp.body)
        meta = spec.metadata
        token = PaymentToken(
            url,
            meta.description if meta and meta.description is not None else description,
            meta.reason if meta and meta.reason is not None else reason,
            spec.price_usd, self.payer_id, spec.network,
        )
        token = replace(token, signature=self.signer.sign(token.signing_bytes()))
        receipt = self.facilitator.settle(token.to_bytes())
        resp = self.transport.get(url, {PAYMENT_HEADER: encode_receipt(receipt)})
        return PaymentResponse(resp.status_code, resp.body, PipelineOutcome(PaymentStatus.PAID, receipt))
