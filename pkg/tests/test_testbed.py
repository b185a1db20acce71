from decimal import Decimal

import httpx
import pytest

from x402guard.audit import AuditLog, MemorySink, Outcome
from x402guard.client import HardenedClient, HttpFacilitator, HttpxTransport, PaymentStatus
from x402guard.pii import EntityType
from x402guard.policy import PolicyConfig, PolicyEngine
from x402guard.replay import ReplayGuard
from x402guard.testbed import (
    INSTRUCTED_VALUES,
    SCENARIOS,
    MockFacilitator,
    MockServer,
    ServerBehaviour,
    SettlementRejected,
    StepClock,
    build,
)
from x402guard.testbed.app import SETTLE_PATH, create_app, serve_loopback
from x402guard.wire import HmacSigner, PaymentToken

D = Decimal


def make_token(reason="r", amount="0.01"):
    t = PaymentToken("https://a.io/r", "d", reason, D(amount), "0xA", "base")
    from dataclasses import replace
    return replace(t, signature=HmacSigner(b"k").sign(t.signing_bytes())).to_bytes()


def test_receipt_is_hash_of_token():
    import hashlib
    fac = MockFacilitator()
    tok = make_token()
    assert fac.settle(tok) == hashlib.sha256(tok).digest()


def test_distinct_tokens_distinct_receipts():
    fac = MockFacilitator()
    assert fac.settle(make_token("a")) != fac.settle(make_token("b"))


def test_recorded_store_shows_plaintext_leak():
    fac = MockFacilitator()
    fac.settle(make_token("user=alice.martin@corp.io"))
    assert fac.leaked(["alice.martin@corp.io"]) == ["alice.martin@corp.io"]


def test_garbage_token_rejected():
    with pytest.raises(SettlementRejected):
        MockFacilitator().settle(b"not a token")


def test_honest_scenario_paid():
    (resp,) = build(SCENARIOS["honest"]).run()
    assert resp.outcome.status is PaymentStatus.PAID


def test_price_inflation_blocked_under_one_dollar_cap():
    policy = PolicyConfig(D("1.00"), D("100"), D("50"))
    bed = build(ServerBehaviour.price_inflation("0.01", 1000), policy=policy)
    (resp,) = bed.run()
    assert resp.outcome.status is PaymentStatus.BLOCKED_POLICY
    assert bed.facilitator.settlements == 0


def test_server_rejects_receipt_for_wrong_price():
    fac = MockFacilitator()
    server = MockServer(ServerBehaviour.honest("0.02"), fac)
    receipt = fac.settle(make_token(amount="0.01"))
    from x402guard.wire import PAYMENT_HEADER, encode_receipt
    assert server.get("https://a.io/r", {PAYMENT_HEADER: encode_receipt(receipt)}).status_code == 402


@pytest.mark.parametrize("entity", list(EntityType))
def test_pii_instructing_filtered_and_unfiltered(entity):
    behaviour = ServerBehaviour.pii_instructing(entity)
    guarded = build(behaviour)
    (resp,) = guarded.run()
    assert resp.outcome.status is PaymentStatus.PAID
    assert guarded.facilitator.leaked(INSTRUCTED_VALUES[entity]) == []
    assert [e.outcome for e in guarded.audit.events] == [Outcome.PII_REDACTED]
    leaky = build(behaviour, pii_filter=False)
    leaky.run()
    assert leaky.facilitator.leaked(INSTRUCTED_VALUES[entity]) == list(INSTRUCTED_VALUES[entity])


def test_step_clock_advances():
    clock = StepClock()
    a, b = clock(), clock()
    assert (b - a).total_seconds() == 1


def test_loopback_http_end_to_end():
    fac = MockFacilitator()
    server = MockServer(ServerBehaviour.pii_instructing(EntityType.US_SSN), fac)
    with serve_loopback(create_app(server)) as base, httpx.Client(timeout=5) as http:
        client = HardenedClient(
            HttpxTransport(http), HttpFacilitator(http, base + SETTLE_PATH),
            signer=HmacSigner(b"s"), policy=PolicyEngine(PolicyConfig(D(1), D(10), D(5))),
            replay=ReplayGuard(b"r"), audit=AuditLog(b"a", MemorySink()), clock=StepClock(),
        )
        resp = client.request(base + "/v1/report")
        assert resp.outcome.status is PaymentStatus.PAID
        assert resp.status_code == 200
        assert http.get(base + "/_stats").json() == {"settlements": 1, "requests": 2}
    assert fac.leaked(INSTRUCTED_VALUES[EntityType.US_SSN]) == []
