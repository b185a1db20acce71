"""Declarative spending limits checked against a rolling 24h spend ledger."""
from __future__ import annotations

import json
import threading
from collections import deque
from dataclasses import dataclass
from datetime import datetime, timedelta
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import Any, Mapping
from urllib.parse import urlsplit

WINDOW = timedelta(hours=24)
POLICY_KEYS = ("max_per_call_usd", "daily_limit_usd", "max_per_endpoint_usd")


class PolicyViolationError(Exception):
    def __init__(self, decision: "PolicyDecision") -> None:
        super().__init__(f"{decision.violated_dimension.value} limit exceeded")
        self.decision = decision


class Dimension(str, Enum):
    PER_CALL = "PER_CALL"
    DAILY = "DAILY"
    PER_ENDPOINT = "PER_ENDPOINT"


def to_usd(value: Any) -> Decimal:
    """Exact decimal from str/int/Decimal; floats go through repr so 0.1 stays 0.1."""
    if isinstance(value, bool):
        raise ValueError("boolean is not an amount")
    try:
        d = Decimal(str(value)) if not isinstance(value, Decimal) else value
    except InvalidOperation as exc:
        raise ValueError(f"not a decimal amount: {value!r}") from exc
    if not d.is_finite():
        raise ValueError(f"not a finite amount: {value!r}")
    return d


@dataclass(frozen=True)
class PolicyConfig:
    max_per_call_usd: Decimal
    daily_limit_usd: Decimal
    max_per_endpoint_usd: Decimal

    def __post_init__(self) -> None:
        for key in POLICY_KEYS:
            v = to_usd(getattr(self, key))
            if v < 0:
                raise ValueError(f"{key} must be >= 0")
            object.__setattr__(self, key, v)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "PolicyConfig":
        unknown = set(data) - set(POLICY_KEYS)
        if unknown:
            raise ValueError(f"unknown policy keys: {sorted(unknown)}")
        missing = [k for k in POLICY_KEYS if k not in data]
        if missing:
            raise ValueError(f"missing policy keys: {missing}")
        return cls(**{k: data[k] for k in POLICY_KEYS})

    @classmethod
    def load(cls, path: str | Path) -> "PolicyConfig":
        # parse_float keeps JSON numbers exact
        data = json.loads(Path(path).read_text(encoding="utf-8"), parse_float=Decimal)
        return cls.from_mapping(data)


@dataclass(frozen=True)
class SpendRecord:
    timestamp: datetime
    host: str
    amount_usd: Decimal

    def __post_init__(self) -> None:
        if self.amount_usd <= 0:
            raise ValueError("spend records carry positive amounts")


@dataclass(frozen=True)
class PolicyDecision:
    allowed: bool
    violated_dimension: Dimension | None
    current_aggregate_usd: Decimal


def normalize_host(url_or_host: str) -> str:
    """Lowercase authority host with port and trailing dot removed."""
    if "://" in url_or_host:
        host = urlsplit(url_or_host).hostname or ""
    else:
        host = urlsplit("//" + url_or_host).hostname or ""
    return host.rstrip(".").lower()


class SpendLedger:
    """Spend records inside the trailing window, oldest first."""

    def __init__(self) -> None:
        self._records: deque[SpendRecord] = deque()

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def add(self, record: SpendRecord) -> None:
        self._records.append(record)
        self.prune(record.timestamp)

    def remove(self, record: SpendRecord) -> None:
        self._records.remove(record)

    def prune(self, now: datetime) -> None:
        # safe: every future check happens at or after `now`
        while self._records and self._records[0].timestamp <= now - WINDOW:
            self._records.popleft()

    def aggregate(self, now: datetime, host: str | None = None) -> Decimal:
        lo = now - WINDOW
        return sum(
            (r.amount_usd for r in self._records
             if lo < r.timestamp <= now and (host is None or r.host == host)),
            Decimal(0),
        )


def check(amount: Decimal, host: str, now: datetime, config: PolicyConfig, ledger: SpendLedger) -> PolicyDecision:
    amount = to_usd(amount)
    if amount <= 0:
        raise ValueError("payment amount must be positive")
    daily = ledger.aggregate(now)
    if amount > config.max_per_call_usd:
        return PolicyDecision(False, Dimension.PER_CALL, daily)
    if daily + amount > config.daily_limit_usd:
        return PolicyDecision(False, Dimension.DAILY, daily)
    per_host = ledger.aggregate(now, normalize_host(host))
    if per_host + amount > config.max_per_endpoint_usd:
        return PolicyDecision(False, Dimension.PER_ENDPOINT, per_host)
    return PolicyDecision(True, None, daily)


def record(amount: Decimal, host: str, now: datetime, ledger: SpendLedger) -> SpendRecord:
    rec = SpendRecord(now, normalize_host(host), to_usd(amount))
    ledger.add(rec)
    return rec


class PolicyEngine:
    """Single spending authority. ``authorize`` checks and records atomically."""

    def __init__(self, config: PolicyConfig, ledger: SpendLedger | None = None) -> None:
        self.config = config
        self.ledger = ledger if ledger is not None else SpendLedger()
        self._lock = threading.Lock()

    def check(self, amount: Decimal, host: str, now: datetime) -> PolicyDecision:
        with self._lock:
            return check(amount, host, now, self.config, self.ledger)

    def authorize(self, amount: Decimal, host: str, now: datetime) -> SpendRecord:
        """Raises PolicyViolationError on denial; nothing is recorded then."""
        with self._lock:
            decision = check(amount, host, now, self.config, self.ledger)
            if not decision.allowed:
                raise PolicyViolationError(decision)
            return record(amount, host, now, self.ledger)

    def release(self, rec: SpendRecord) -> None:
        """Undo an authorization whose payment never went out."""
        with self._lock:
            try:
                self.ledger.remove(rec)
            except ValueError:
                pass

    def daily_aggregate(self, now: datetime) -> Decimal:
        with self._lock:
            return self.ledger.aggregate(now)
