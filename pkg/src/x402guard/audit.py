"""HMAC-chained JSON-L audit trail.

Each line's ``chain_mac`` is HMAC-SHA256(key, previous_mac || canonical event),
so editing, dropping or reordering any line breaks every MAC after it.
"""
from __future__ import annotations

import hashlib
import hmac
import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Protocol

GENESIS_MAC = bytes(32)
EVENT_FIELDS = ("ts", "agent_id", "resource_url", "outcome", "detail", "seq")
LINE_FIELDS = EVENT_FIELDS + ("chain_mac",)


class AuditError(Exception):
    """The event could not be serialized or written; the payment must not proceed."""


class Outcome(str, Enum):
    ALLOWED = "ALLOWED"
    PII_REDACTED = "PII_REDACTED"
    POLICY_BLOCKED = "POLICY_BLOCKED"
    REPLAY_BLOCKED = "REPLAY_BLOCKED"
    ERROR = "ERROR"


def format_ts(when: datetime) -> str:
    if when.tzinfo is None:
        raise ValueError("audit timestamps must be timezone-aware")
    return when.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.") + f"{when.microsecond // 1000:03d}Z"


@dataclass(frozen=True)
class ChainState:
    last_mac: bytes = GENESIS_MAC
    next_seq: int = 0


@dataclass(frozen=True)
class AuditEvent:
    ts: str
    agent_id: str
    resource_url: str
    outcome: Outcome
    detail: str
    seq: int
    chain_mac: str

    def body(self) -> dict:
        return {
            "ts": self.ts,
            "agent_id": self.agent_id,
            "resource_url": self.resource_url,
            "outcome": Outcome(self.outcome).value,
            "detail": self.detail,
            "seq": self.seq,
        }

    def to_line(self) -> str:
        return _dumps({**self.body(), "chain_mac": self.chain_mac})


def _dumps(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _mac(key: bytes, prev: bytes, body: dict) -> str:
    return hmac.new(key, prev + _dumps(body).encode("utf-8"), hashlib.sha256).hexdigest()


def append(ts: datetime | str, agent_id: str, resource_url: str, outcome: Outcome | str, detail: str,
           state: ChainState, key: bytes) -> tuple[AuditEvent, ChainState]:
    if not key:
        raise AuditError("audit key must be nonempty")
    try:
        body = {
            "ts": ts if isinstance(ts, str) else format_ts(ts),
            "agent_id": str(agent_id),
            "resource_url": str(resource_url),
            "outcome": Outcome(outcome).value,
            "detail": str(detail),
            "seq": state.next_seq,
        }
        mac = _mac(key, state.last_mac, body)
    except (TypeError, ValueError) as exc:
        raise AuditError(f"cannot serialize audit event: {exc}") from exc
    event = AuditEvent(chain_mac=mac, **{**body, "outcome": Outcome(body["outcome"])})
    return event, ChainState(bytes.fromhex(mac), state.next_seq + 1)


@dataclass(frozen=True)
class Verification:
    ok: bool
    position: int | None = None
    reason: str = ""

    def __str__(self) -> str:
        return "OK" if self.ok else f"TAMPERED at seq {self.position}"


def _parse_line(raw: bytes) -> dict:
    text = raw.decode("utf-8")
    obj = json.loads(text)
    if not isinstance(obj, dict) or tuple(obj) != LINE_FIELDS:
        raise ValueError("unexpected fields")
    if not isinstance(obj["seq"], int) or isinstance(obj["seq"], bool):
        raise ValueError("seq is not an integer")
    for name in ("ts", "agent_id", "resource_url", "outcome", "detail", "chain_mac"):
        if not isinstance(obj[name], str):
            raise ValueError(f"{name} is not a string")
    Outcome(obj["outcome"])
    # one canonical byte form per event: anything else is an edit
    if _dumps(obj).encode("utf-8") != raw:
        raise ValueError("non-canonical encoding")
    return obj


def verify_chain(lines: Iterable[bytes | str], key: bytes, head: ChainState | None = None) -> Verification:
    """Recompute every MAC from genesis.

    ``head`` is the writer's last known state; without it, losing the final
    lines of a log is indistinguishable from a shorter log.
    """
    prev = GENESIS_MAC
    count = 0
    for i, raw in enumerate(lines):
        if isinstance(raw, str):
            raw = raw.encode("utf-8")
        count = i + 1
        try:
            obj = _parse_line(raw)
        except (UnicodeDecodeError, ValueError) as exc:
            return Verification(False, i, f"malformed line: {exc}")
        if obj["seq"] != i:
            return Verification(False, i, f"expected seq {i}, found {obj['seq']}")
        body = {k: obj[k] for k in EVENT_FIELDS}
        expected = _mac(key, prev, body)
        if not hmac.compare_digest(expected, obj["chain_mac"]):
            return Verification(False, i, "chain_mac mismatch")
        prev = bytes.fromhex(expected)
    if head is not None:
        if count != head.next_seq:
            return Verification(False, min(count, head.next_seq), f"log holds {count} events, head says {head.next_seq}")
        if prev != head.last_mac:
            return Verification(False, max(count - 1, 0), "last MAC differs from head")
    return Verification(True)


def split_log(data: bytes) -> list[bytes]:
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    return lines


def verify_file(path: str | Path, key: bytes, use_head: bool = True) -> Verification:
    path = Path(path)
    head = None
    head_path = head_path_for(path)
    if use_head and head_path.exists():
        head = read_head(head_path)
    return verify_chain(split_log(path.read_bytes()), key, head)


def head_path_for(path: Path) -> Path:
    return path.with_name(path.name + ".head")


def read_head(path: Path) -> ChainState:
    obj = json.loads(path.read_text(encoding="utf-8"))
    return ChainState(bytes.fromhex(obj["last_mac"]), int(obj["next_seq"]))


class AuditSink(Protocol):
    def write(self, line: str, state: ChainState) -> None: ...


class MemorySink:
    def __init__(self) -> None:
        self.lines: list[str] = []

    def write(self, line: str, state: ChainState) -> None:
        self.lines.append(line)


class FileSink:
    """Append-only JSON-L file plus a ``.head`` sidecar holding the chain head."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.head_path = head_path_for(self.path)

    def resume(self) -> ChainState:
        if self.head_path.exists():
            return read_head(self.head_path)
        return ChainState()

    def write(self, line: str, state: ChainState) -> None:
        with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        tmp = self.head_path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"next_seq": state.next_seq, "last_mac": state.last_mac.hex()}), encoding="utf-8")
        os.replace(tmp, self.head_path)


class AuditLog:
    """Serialises appends: the chain needs a total order."""

    def __init__(self, key: bytes, sink: AuditSink | None = None, state: ChainState | None = None) -> None:
        if not key:
            raise ValueError("audit key must be nonempty")
        self._key = key
        self.sink = sink if sink is not None else MemorySink()
        if state is None:
            state = self.sink.resume() if isinstance(self.sink, FileSink) else ChainState()
        self.state = state
        self._lock = threading.Lock()
        self.events: list[AuditEvent] = []

    def append(self, when: datetime, agent_id: str, resource_url: str, outcome: Outcome, detail: str = "") -> AuditEvent:
        with self._lock:
            event, new_state = append(when, agent_id, resource_url, outcome, detail, self.state, self._key)
            try:
                self.sink.write(event.to_line(), new_state)
            except OSError as exc:
                raise AuditError(f"audit sink failed: {exc}") from exc
            self.state = new_state
            self.events.append(event)
            return event

    def verify(self, lines: Iterable[bytes | str]) -> Verification:
        return verify_chain(lines, self._key, self.state)
