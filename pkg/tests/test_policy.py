import threading
from datetime import datetime, timedelta, timezone
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x402guard.policy import (
    Dimension,
    PolicyConfig,
    PolicyEngine,
    PolicyViolationError,
    SpendLedger,
    check,
    normalize_host,
    record,
)

D = Decimal
CFG = PolicyConfig(D("5"), D("100"), D("50"))
T0 = datetime(2026, 3, 1, 12, 0, tzinfo=timezone.utc)


def test_per_call_breach(t0):
    d = check(D("10.00"), "api.x.io", t0, CFG, SpendLedger())
    assert not d.allowed and d.violated_dimension is Dimension.PER_CALL


def test_all_slack(t0):
    d = check(D("1.00"), "api.x.io", t0, CFG, SpendLedger())
    assert d.allowed and d.violated_dimension is None


def test_daily_breach_after_hundred_dollars(t0):
    ledger = SpendLedger()
    cfg = PolicyConfig(D("5"), D("100"), D("1000"))
    for i in range(100):
        record(D("1.00"), "api.x.io", t0 - timedelta(minutes=i), ledger)
    assert ledger.aggregate(t0) == D("100.00")
    d = check(D("1.00"), "api.x.io", t0, cfg, ledger)
    assert d.violated_dimension is Dimension.DAILY and d.current_aggregate_usd == D("100.00")


def test_check_order_per_call_before_daily(t0):
    ledger = SpendLedger()
    record(D("5"), "a.io", t0, ledger)
    tight = PolicyConfig(D("1"), D("5"), D("5"))
    assert check(D("2"), "a.io", t0, tight, ledger).violated_dimension is Dimension.PER_CALL
    assert check(D("1"), "a.io", t0, tight, ledger).violated_dimension is Dimension.DAILY


def test_per_endpoint_is_per_host(t0):
    ledger = SpendLedger()
    cfg = PolicyConfig(D("5"), D("100"), D("5"))
    record(D("4"), "https://API.x.io:443/a", t0, ledger)
    assert check(D("2"), "api.x.io", t0, cfg, ledger).violated_dimension is Dimension.PER_ENDPOINT
    assert check(D("2"), "other.io", t0, cfg, ledger).allowed


def test_aggregates(t0):
    ledger = SpendLedger()
    record(D("1.00"), "a.io", t0, ledger)
    assert ledger.aggregate(t0) == D("1.00")
    ledger = SpendLedger()
    for _ in range(3):
        record(D("2.50"), "a.io", t0, ledger)
    assert ledger.aggregate(t0) == D("7.50")


def test_window_boundary(t0):
    ledger = SpendLedger()
    record(D("1.00"), "a.io", t0, ledger)
    assert ledger.aggregate(t0 + timedelta(hours=24) - timedelta(seconds=1)) == D("1.00")
    # half-open window: exactly 24h old is already outside
    assert ledger.aggregate(t0 + timedelta(hours=24)) == D(0)
    assert ledger.aggregate(t0 + timedelta(hours=24, seconds=1)) == D(0)


def test_exact_decimal_no_float_drift(t0):
    ledger = SpendLedger()
    cfg = PolicyConfig(D("1"), D("0.3"), D("1"))
    for _ in range(3):
        assert check(D("0.1"), "a.io", t0, cfg, ledger).allowed
        record(D("0.1"), "a.io", t0, ledger)
    assert ledger.aggregate(t0) == D("0.3")
    assert check(D("0.01"), "a.io", t0, cfg, ledger).violated_dimension is Dimension.DAILY


def test_nonpositive_amount_rejected(t0):
    with pytest.raises(ValueError):
        check(D("0"), "a.io", t0, CFG, SpendLedger())
    with pytest.raises(ValueError):
        check(D("-1"), "a.io", t0, CFG, SpendLedger())


def test_config_load_json(tmp_path):
    p = tmp_path / "policy.json"
    p.write_text('{"max_per_call_usd": 0.10, "daily_limit_usd": "5", "max_per_endpoint_usd": 2}')
    cfg = PolicyConfig.load(p)
    assert cfg.max_per_call_usd == D("0.10") and cfg.daily_limit_usd == D("5")


@pytest.mark.parametrize("body", [
    '{"max_per_call_usd": 1, "daily_limit_usd": 5}',
    '{"max_per_call_usd": 1, "daily_limit_usd": 5, "max_per_endpoint_usd": 2, "extra": 1}',
    '{"max_per_call_usd": -1, "daily_limit_usd": 5, "max_per_endpoint_usd": 2}',
    '{"max_per_call_usd": "abc", "daily_limit_usd": 5, "max_per_endpoint_usd": 2}',
])
def test_config_load_rejects(tmp_path, body):
    p = tmp_path / "policy.json"
    p.write_text(body)
    with pytest.raises(ValueError):
        PolicyConfig.load(p)


def test_normalize_host():
    assert normalize_host("https://API.Example.io:8443/x?y") == "api.example.io"
    assert normalize_host("api.example.io.") == "api.example.io"


def test_authorize_records_and_release_rolls_back(t0):
    eng = PolicyEngine(CFG)
    rec = eng.authorize(D("2"), "a.io", t0)
    assert eng.daily_aggregate(t0) == D("2")
    eng.release(rec)
    assert eng.daily_aggregate(t0) == D("0")
    with pytest.raises(PolicyViolationError) as info:
        eng.authorize(D("6"), "a.io", t0)
    assert info.value.decision.violated_dimension is Dimension.PER_CALL
    assert eng.daily_aggregate(t0) == D("0")


def test_concurrent_authorize_never_overspends(t0):
    eng = PolicyEngine(PolicyConfig(D("1"), D("10"), D("10")))
    allowed = []
    barrier = threading.Barrier(16)

    def worker():
        barrier.wait()
        for _ in range(5):
            try:
                eng.authorize(D("1"), "a.io", t0)
                allowed.append(1)
            except PolicyViolationError:
                pass

    threads = [threading.Thread(target=worker) for _ in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(allowed) == 10 and eng.daily_aggregate(t0) == D("10")


cents = st.integers(min_value=1, max_value=2000).map(lambda c: D(c) / 100)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(cents, st.integers(0, 48 * 60)), max_size=40))
def test_engine_keeps_every_window_within_limits(events):
    t0 = T0
    # oracle: replay the accepted records and recompute every window by brute force
    cfg = PolicyConfig(D("5"), D("20"), D("12"))
    eng = PolicyEngine(cfg)
    accepted = []
    for amount, minute in sorted(events, key=lambda e: e[1]):
        now = t0 + timedelta(minutes=minute)
        try:
            eng.authorize(amount, "a.io", now)
            accepted.append((now, amount))
        except PolicyViolationError:
            pass
    for now, _ in accepted:
        window = sum((a for ts, a in accepted if now - timedelta(hours=24) < ts <= now), D(0))
        assert window <= cfg.max_per_endpoint_usd
    assert all(a <= cfg.max_per_call_usd for _, a in accepted)
