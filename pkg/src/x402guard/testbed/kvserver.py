"""Tiny Redis-protocol server (SET .. NX PX, PING) for exercising TcpKVStore."""
from __future__ import annotations

import socketserver
import threading
import time
from typing import Callable


class _Handler(socketserver.StreamRequestHandler):
    server: "KVServer"

    def _read_command(self) -> list[bytes] | None:
        line = self.rfile.readline()
        if not line:
            return None
        if not line.startswith(b"*"):
            return line.strip().split()
        args = []
        for _ in range(int(line[1:].strip())):
            size = int(self.rfile.readline()[1:].strip())
            args.append(self.rfile.read(size + 2)[:size])
        return args

    def handle(self) -> None:
        while True:
            args = self._read_command()
            if args is None:
                return
            if self.server.stall_seconds:
                time.sleep(self.server.stall_seconds)
            self.wfile.write(self.server.execute(args))
            self.wfile.flush()


class KVServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, host: str = "127.0.0.1", port: int = 0, clock: Callable[[], float] = time.monotonic) -> None:
        super().__init__((host, port), _Handler)
        self.clock = clock
        self.stall_seconds = 0.0
        self._data: dict[bytes, float] = {}
        self._lock = threading.Lock()
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self.server_address[0], self.server_address[1]

    def execute(self, args: list[bytes]) -> bytes:
        cmd = args[0].upper() if args else b""
        if cmd == b"PING":
            return b"+PONG\r\n"
        if cmd == b"SET" and len(args) == 6 and args[3].upper() == b"NX" and args[4].upper() == b"PX":
            key, ttl_ms = args[1], int(args[5])
            now = self.clock()
            with self._lock:
                expiry = self._data.get(key)
                if expiry is not None and now < expiry:
                    return b"$-1\r\n"
                self._data[key] = now + ttl_ms / 1000.0
            return b"+OK\r\n"
        return b"-ERR unsupported command\r\n"

    def start(self) -> "KVServer":
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self.shutdown()
        self.server_close()

    def __enter__(self) -> "KVServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
