"""HTTP face of the testbed, for runs over real sockets."""
from __future__ import annotations

import contextlib
import threading
import time
from typing import Iterator

from fastapi import FastAPI, Request, Response
from pydantic import BaseModel

from .mock import MockFacilitator, MockServer, SettlementRejected

SETTLE_PATH = "/facilitator/settle"


class Stats(BaseModel):
    settlements: int
    requests: int


def create_app(server: MockServer) -> FastAPI:
    app = FastAPI(title="x402 testbed")
    facilitator: MockFacilitator = server.facilitator

    @app.post(SETTLE_PATH)
    async def settle(request: Request) -> Response:
        try:
            receipt = facilitator.settle(await request.body())
        except SettlementRejected as exc:
            return Response(str(exc).encode(), status_code=400)
        return Response(receipt, media_type="application/octet-stream")

    @app.get("/_stats", response_model=Stats)
    def stats() -> Stats:
        return Stats(settlements=facilitator.settlements, requests=server.requests)

    @app.get("/{path:path}")
    def resource(path: str, request: Request) -> Response:
        r = server.get(str(request.url), dict(request.headers))
        return Response(r.body, status_code=r.status_code, headers=r.headers)

    return app


@contextlib.contextmanager
def serve_loopback(app: FastAPI, host: str = "127.0.0.1") -> Iterator[str]:
    """Run ``app`` with uvicorn on an ephemeral loopback port; yields the base URL."""
    import uvicorn

    config = uvicorn.Config(app, host=host, port=0, log_level="warning", lifespan="off")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("testbed server did not start")
        time.sleep(0.01)
    port = server.servers[0].sockets[0].getsockname()[1]
    try:
        yield f"http://{host}:{port}"
    finally:
        server.should_exit = True
        thread.join(timeout=5)
