"""Wire a client to a mock server and run a scripted scenario end to end."""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from decimal import Decimal
from typing import Callable

from ..audit import AuditLog, MemorySink
from ..client import RECOMMENDED_DETECTOR, HardenedClient, PaymentResponse
from ..pii import DetectorConfig
from ..policy import PolicyConfig, PolicyEngine
from ..replay import InMemoryStore, ReplayGuard
from ..wire import HmacSigner
from .mock import Kind, MockFacilitator, MockServer, ServerBehaviour

SLACK_POLICY = PolicyConfig(Decimal("5.00"), Decimal("100.00"), Decimal("50.00"))
DEMO_URL = "https://api.example-data.io/v1/reports/q3-summary"

SCENARIOS: dict[str, ServerBehaviour] = {
    "honest": ServerBehaviour.honest("0.01"),
    "price-inflation": ServerBehaviour.price_inflation("0.01", 1000),
    "pii-instructing": ServerBehaviour.pii_instructing("EMAIL_ADDRESS"),
    "replay-echo": ServerBehaviour.replay_echo("0.01"),
}


class StepClock:
    """Deterministic clock: each call advances by ``step``."""

    def __init__(self, start: datetime | None = None, step: timedelta = timedelta(seconds=1)) -> None:
        self.now = start or datetime(2026, 1, 1, tzinfo=timezone.utc)
        self.step = step

    def __call__(self) -> datetime:
        t = self.now
        self.now = t + self.step
        return t


@dataclass
class Testbed:
    server: MockServer
    facilitator: MockFacilitator
    client: HardenedClient
    audit: AuditLog

    def run(self, url: str = DEMO_URL, description: str = "", reason: str = "") -> list[PaymentResponse]:
        """One request; REPLAY_ECHO needs no second call since the server re-demands payment."""
        return [self.client.request(url, description=description, reason=reason)]


def build(behaviour: ServerBehaviour, *, policy: PolicyConfig = SLACK_POLICY,
          detector: DetectorConfig = RECOMMENDED_DETECTOR, pii_filter: bool = True,
          replay_guard: bool = True, audit: AuditLog | None = None,
          clock: Callable[[], datetime] | None = None, engine=None) -> Testbed:
    facilitator = MockFacilitator()
    server = MockServer(behaviour, facilitator)
    audit = audit or AuditLog(b"audit-key-testbed", MemorySink())
    client = HardenedClient(
        server, facilitator,
        signer=HmacSigner(b"signing-key-testbed"),
        policy=PolicyEngine(policy),
        replay=ReplayGuard(b"replay-key-testbed", InMemoryStore()),
        audit=audit,
        detector=detector,
        engine=engine,
        agent_id="agent-demo",
        payer_id="0xA6E17",
        clock=clock or StepClock(),
        pii_filter=pii_filter,
        replay_guard=replay_guard,
    )
    return Testbed(server, facilitator, client, audit)


def is_replay(behaviour: ServerBehaviour) -> bool:
    return behaviour.kind is Kind.REPLAY_ECHO
