import hashlib
import hmac
import json
import random
from datetime import datetime, timezone

import pytest

from x402guard.audit import (
    GENESIS_MAC,
    AuditError,
    AuditLog,
    ChainState,
    FileSink,
    MemorySink,
    Outcome,
    append,
    format_ts,
    head_path_for,
    verify_chain,
    verify_file,
)

from tamper import KINDS, build_log, lines_of, tamper

KEY = b"audit-test-key"
T = datetime(2026, 1, 1, 9, 30, 15, 123456, tzinfo=timezone.utc)


def test_timestamp_format():
    assert format_ts(T) == "2026-01-01T09:30:15.123Z"
    with pytest.raises(ValueError):
        format_ts(datetime(2026, 1, 1))


def test_genesis_event():
    event, state = append(T, "agent-1", "https://a.io/x", Outcome.ALLOWED, "ok", ChainState(), KEY)
    assert event.seq == 0
    body = '{"ts":"2026-01-01T09:30:15.123Z","agent_id":"agent-1","resource_url":"https://a.io/x",' \
           '"outcome":"ALLOWED","detail":"ok","seq":0}'
    expected = hmac.new(KEY, GENESIS_MAC + body.encode(), hashlib.sha256).hexdigest()
    assert event.chain_mac == expected
    assert state == ChainState(bytes.fromhex(expected), 1)


def test_line_field_order():
    event, _ = append(T, "a", "u", Outcome.ERROR, "d", ChainState(), KEY)
    assert list(json.loads(event.to_line())) == ["ts", "agent_id", "resource_url", "outcome", "detail", "seq", "chain_mac"]


def test_identical_payloads_get_different_macs():
    e0, s = append(T, "a", "u", Outcome.ALLOWED, "d", ChainState(), KEY)
    e1, _ = append(T, "a", "u", Outcome.ALLOWED, "d", s, KEY)
    assert (e0.seq, e1.seq) == (0, 1) and e0.chain_mac != e1.chain_mac


def test_untampered_log_verifies():
    log = build_log(KEY, 100)
    assert verify_chain(lines_of(log), KEY).ok
    assert log.verify(lines_of(log)).ok
    assert str(verify_chain(lines_of(log), KEY)) == "OK"


def test_wrong_key_fails_at_zero():
    log = build_log(KEY, 5)
    assert verify_chain(lines_of(log), b"other").position == 0


def test_flip_in_detail_of_event_42():
    log = build_log(KEY, 100)
    lines = lines_of(log)
    obj = json.loads(lines[42])
    obj["detail"] = obj["detail"][:-1] + ("x" if obj["detail"][-1] != "x" else "y")
    lines[42] = json.dumps(obj, separators=(",", ":")).encode()
    result = verify_chain(lines, KEY)
    assert not result.ok and result.position == 42
    assert str(result) == "TAMPERED at seq 42"


def test_delete_event_10():
    log = build_log(KEY, 100)
    lines = lines_of(log)
    del lines[10]
    assert verify_chain(lines, KEY).position == 10


def test_truncation_needs_head():
    log = build_log(KEY, 20)
    lines = lines_of(log)[:-3]
    assert verify_chain(lines, KEY).ok  # a shorter log is self-consistent
    result = log.verify(lines)
    assert not result.ok and result.position == 17


def test_non_canonical_reencoding_is_tampering():
    log = build_log(KEY, 3)
    lines = lines_of(log)
    lines[1] = json.dumps(json.loads(lines[1])).encode()  # default separators add spaces
    assert verify_chain(lines, KEY).position == 1


def test_uppercase_mac_rejected():
    log = build_log(KEY, 3)
    lines = lines_of(log)
    obj = json.loads(lines[2])
    obj["chain_mac"] = obj["chain_mac"].upper()
    lines[2] = json.dumps(obj, separators=(",", ":")).encode()
    assert verify_chain(lines, KEY).position == 2


@pytest.mark.parametrize("kind", KINDS)
def test_each_edit_kind_detected(kind):
    log = build_log(KEY, 50)
    rng = random.Random(kind)
    for _ in range(50):
        lines, pos = tamper(lines_of(log), kind, rng)
        result = log.verify(lines)
        assert not result.ok and result.position <= pos + 1


def test_file_sink_roundtrip_and_resume(tmp_path):
    path = tmp_path / "logs" / "audit.jsonl"
    log = AuditLog(KEY, FileSink(path))
    for i in range(5):
        log.append(T, "a", f"u{i}", Outcome.ALLOWED, "d")
    again = AuditLog(KEY, FileSink(path))
    assert again.state == log.state
    again.append(T, "a", "u5", Outcome.POLICY_BLOCKED, "d")
    assert verify_file(path, KEY).ok
    assert head_path_for(path).exists()
    # drop the last line: only the head notices
    data = path.read_bytes().splitlines(keepends=True)
    path.write_bytes(b"".join(data[:-1]))
    assert str(verify_file(path, KEY)) == "TAMPERED at seq 5"
    assert verify_file(path, KEY, use_head=False).ok


def test_sink_failure_surfaces_as_audit_error():
    class Broken(MemorySink):
        def write(self, line, state):
            raise OSError("disk full")

    log = AuditLog(KEY, Broken())
    with pytest.raises(AuditError):
        log.append(T, "a", "u", Outcome.ALLOWED, "d")
    assert log.state == ChainState()


def test_naive_timestamp_is_audit_error():
    with pytest.raises(AuditError):
        append(datetime(2026, 1, 1), "a", "u", Outcome.ALLOWED, "d", ChainState(), KEY)


def test_empty_key_rejected():
    with pytest.raises(ValueError):
        AuditLog(b"")
