"""HMAC fingerprints over payment-token fields with TTL-bounded deduplication."""
from __future__ import annotations

import hashlib
import hmac
import logging
import socket
import struct
import threading
from datetime import datetime, timedelta
from enum import Enum
from typing import Mapping, Protocol

logger = logging.getLogger(__name__)

DEFAULT_TTL = timedelta(hours=24)


class ReplayDetectedError(Exception):
    pass


class StoreUnavailable(Exception):
    """The external store did not answer in time or answered garbage."""


class Freshness(str, Enum):
    FRESH = "FRESH"
    DUPLICATE = "DUPLICATE"


def canonical_fields(token_fields: Mapping[str, object]) -> bytes:
    """Length-prefixed name/value pairs, in mapping order.

    Prefixing every part makes ``{a: "b", c: ""}`` and ``{a: "", c: "b"}``
    serialize differently.
    """
    out = bytearray()
    for name, value in token_fields.items():
        for part in (str(name).encode("utf-8"), str(value).encode("utf-8")):
            out += struct.pack(">I", len(part))
            out += part
    return bytes(out)


def fingerprint(token_fields: Mapping[str, object], key: bytes) -> bytes:
    if not key:
        raise ValueError("replay guard key must be nonempty")
    return hmac.new(key, canonical_fields(token_fields), hashlib.sha256).digest()


class DedupStore(Protocol):
    ttl: timedelta

    def check_and_record(self, fp: bytes, now: datetime) -> Freshness: ...


class InMemoryStore:
    """Default store. Expired entries are ignored and swept lazily."""

    def __init__(self, ttl: timedelta = DEFAULT_TTL, sweep_every: int = 1024) -> None:
        if ttl <= timedelta(0):
            raise ValueError("ttl must be positive")
        self.ttl = ttl
        self._expiry: dict[bytes, datetime] = {}
        self._lock = threading.Lock()
        self._ops = 0
        self._sweep_every = sweep_every

    def __len__(self) -> int:
        return len(self._expiry)

    def check_and_record(self, fp: bytes, now: datetime) -> Freshness:
        with self._lock:
            self._ops += 1
            if self._ops % self._sweep_every == 0:
                self._sweep(now)
            expires = self._expiry.get(fp)
            if expires is not None and now < expires:
                return Freshness.DUPLICATE
            self._expiry[fp] = now + self.ttl
            return Freshness.FRESH

    def _sweep(self, now: datetime) -> None:
        dead = [fp for fp, exp in self._expiry.items() if exp <= now]
        for fp in dead:
            del self._expiry[fp]


class TcpKVStore:
    """Set-if-absent-with-expiry over TCP, speaking the Redis wire protocol
    (``SET key 1 NX PX ttl_ms``). Expiry is kept by the server's clock."""

    def __init__(self, host: str, port: int, ttl: timedelta = DEFAULT_TTL,
                 timeout: float = 0.25, prefix: bytes = b"x402:fp:") -> None:
        self.host = host
        self.port = port
        self.ttl = ttl
        self.timeout = timeout
        self.prefix = prefix
        self._local = threading.local()

    def _conn(self) -> socket.socket:
        sock = getattr(self._local, "sock", None)
        if sock is None:
            sock = socket.create_connection((self.host, self.port), timeout=self.timeout)
            sock.settimeout(self.timeout)
            self._local.sock = sock
            self._local.buf = b""
        return sock

    def _drop(self) -> None:
        sock = getattr(self._local, "sock", None)
        if sock is not None:
            try:
                sock.close()
            except OSError:
                pass
        self._local.sock = None

    def _readline(self, sock: socket.socket) -> bytes:
        buf = self._local.buf
        while b"\r\n" not in buf:
            chunk = sock.recv(4096)
            if not chunk:
                raise StoreUnavailable("connection closed")
            buf += chunk
        line, _, rest = buf.partition(b"\r\n")
        self._local.buf = rest
        return line

    def command(self, *args: bytes) -> bytes:
        payload = b"*%d\r\n" % len(args) + b"".join(b"$%d\r\n%s\r\n" % (len(a), a) for a in args)
        try:
            sock = self._conn()
            sock.sendall(payload)
            return self._readline(sock)
        except (OSError, StoreUnavailable) as exc:
            self._drop()
            raise StoreUnavailable(str(exc)) from exc

    def check_and_record(self, fp: bytes, now: datetime) -> Freshness:
        ttl_ms = int(self.ttl.total_seconds() * 1000)
        reply = self.command(b"SET", self.prefix + fp.hex().encode(), b"1", b"NX", b"PX", str(ttl_ms).encode())
        if reply == b"+OK":
            return Freshness.FRESH
        if reply == b"$-1":
            return Freshness.DUPLICATE
        self._drop()
        raise StoreUnavailable(f"unexpected reply {reply[:40]!r}")


class FallbackStore:
    """External store with in-memory fallback; an outage never turns into a bypass.

    Fingerprints recorded in memory during an outage are not copied to the
    external store once it recovers, so cross-process coverage is reduced
    for that period.
    """

    def __init__(self, primary: DedupStore, fallback: InMemoryStore | None = None) -> None:
        self.primary = primary
        self.ttl = primary.ttl
        self.fallback = fallback if fallback is not None else InMemoryStore(primary.ttl)
        self.fallbacks = 0

    def check_and_record(self, fp: bytes, now: datetime) -> Freshness:
        try:
            return self.primary.check_and_record(fp, now)
        except StoreUnavailable as exc:
            self.fallbacks += 1
            logger.warning("replay store unavailable, using in-memory store: %s", exc)
            return self.fallback.check_and_record(fp, now)


TOKEN_FIELD_ORDER = ("resource_url", "description", "reason", "amount_usd", "payer_id", "network")


class ReplayGuard:
    def __init__(self, key: bytes, store: DedupStore | None = None) -> None:
        if not key:
            raise ValueError("replay guard key must be nonempty")
        self._key = key
        self.store = store if store is not None else InMemoryStore()

    def fingerprint(self, token_fields: Mapping[str, object]) -> bytes:
        return fingerprint(token_fields, self._key)

    def check(self, token_fields: Mapping[str, object], now: datetime) -> bytes:
        """Record the token; raises ReplayDetectedError if it was seen within the TTL."""
        fp = self.fingerprint(token_fields)
        if self.store.check_and_record(fp, now) is Freshness.DUPLICATE:
            raise ReplayDetectedError(fp.hex())
        return fp
