"""A scripted local chat-completions server for client/runner tests.

The server accepts POSTs to /v1/chat/completions and delegates to a
swappable ``responder`` callable.  It tracks request bodies, auth headers,
and the high-water mark of concurrent in-flight requests so tests can assert
on retry counts, header propagation, and concurrency bounds.
"""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any, Callable

Responder = Callable[[dict, int], tuple[int, Any]]


def completion_body(text: str, finish_reason: str = "stop") -> dict:
    return {
        "choices": [
            {"message": {"role": "assistant", "content": text}, "finish_reason": finish_reason}
        ]
    }


def fixed_responder(text: str, finish_reason: str = "stop") -> Responder:
    def respond(body: dict, index: int) -> tuple[int, Any]:
        return 200, completion_body(text, finish_reason)

    return respond


class MockEndpoint:
    def __init__(self, delay_seconds: float = 0.0) -> None:
        self.delay_seconds = delay_seconds
        self.responder: Responder = fixed_responder('{"answer":"A"}')
        self.request_bodies: list[dict] = []
        self.auth_headers: list[str | None] = []
        self.request_count = 0
        self.in_flight = 0
        self.max_in_flight = 0
        self._lock = threading.Lock()

        endpoint = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args: object) -> None:
                pass

            def do_POST(self) -> None:
                if self.path != "/v1/chat/completions":
                    self.send_error(404)
                    return
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length).decode("utf-8"))
                with endpoint._lock:
                    index = endpoint.request_count
                    endpoint.request_count += 1
                    endpoint.request_bodies.append(body)
                    endpoint.auth_headers.append(self.headers.get("Authorization"))
                    endpoint.in_flight += 1
                    endpoint.max_in_flight = max(endpoint.max_in_flight, endpoint.in_flight)
                try:
                    if endpoint.delay_seconds:
                        time.sleep(endpoint.delay_seconds)
                    status, payload = endpoint.responder(body, index)
                finally:
                    with endpoint._lock:
                        endpoint.in_flight -= 1
                raw = payload if isinstance(payload, bytes) else json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(raw)))
                self.end_headers()
                self.wfile.write(raw)

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "MockEndpoint":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5)

    def reset(self) -> None:
        with self._lock:
            self.request_bodies.clear()
            self.auth_headers.clear()
            self.request_count = 0
            self.max_in_flight = 0
