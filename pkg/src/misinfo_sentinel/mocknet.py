"""Deterministic local mock of the reputation services.

Serves canned v3-style URL reports from a fixture directory and a
blocklist feed dump, speaking exactly the wire shapes the reputation
clients consume, so the client code path is identical live and mocked.
Fault scripts inject status sequences ("429,429,200") or delays, and
every request is timestamped into an append-only log for rate-limit
assertions.

Fixture layout::

    fixtures/
      reports/<sha256-of-url>.json   # canned URL-report bodies
      blocklist.json                 # feed dump: [{"url": ..., "verified": "yes"}]
      faults.json                    # optional: {"report_endpoint": [429, 429, 200]}
"""

from __future__ import annotations

import base64
import binascii
import hashlib
import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import MocknetStartupError


def url_fixture_name(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest() + ".json"


class MockReputationServer:
    def __init__(self, fixture_dir, port: int = 0, require_api_key: bool = True):
        self.fixture_dir = Path(fixture_dir)
        self.require_api_key = require_api_key
        self._log: list[dict] = []
        self._log_lock = threading.Lock()
        self._faults: list = []
        self._fault_lock = threading.Lock()
        self._requested_port = port
        self._server: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None
        faults_file = self.fixture_dir / "faults.json"
        if faults_file.exists():
            self.set_fault_script(json.loads(faults_file.read_text())["report_endpoint"])

    # -- lifecycle ---------------------------------------------------------
    def start(self) -> "MockReputationServer":
        handler = _make_handler(self)
        try:
            self._server = ThreadingHTTPServer(("127.0.0.1", self._requested_port), handler)
        except OSError as exc:
            raise MocknetStartupError(
                f"cannot bind port {self._requested_port}: {exc}"
            ) from exc
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    # -- scripting and introspection ----------------------------------------
    def set_fault_script(self, sequence):
        """Faults consumed one per report request: int status, "timeout",
        or {"delay": seconds}.  200 entries pass through to normal handling."""
        with self._fault_lock:
            self._faults = list(sequence)

    def next_fault(self):
        with self._fault_lock:
            return self._faults.pop(0) if self._faults else None

    def record(self, method: str, path: str, status: int):
        with self._log_lock:
            self._log.append({"time": time.time(), "method": method, "path": path, "status": status})

    def request_log(self) -> list[dict]:
        with self._log_lock:
            return [dict(r) for r in self._log]


def serve(fixture_dir, port: int = 0, require_api_key: bool = True) -> MockReputationServer:
    """Start a mock server and return its handle."""
    return MockReputationServer(fixture_dir, port, require_api_key).start()


def _make_handler(mock: MockReputationServer):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):  # silence stderr chatter
            pass

        def _send(self, status: int, body: dict | list, log: bool = True):
            data = json.dumps(body).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)
            if log:
                mock.record("GET", self.path, status)

        def do_GET(self):
            path = self.path.split("?")[0]
            if path.startswith("/api/v3/urls/"):
                self._report(path.removeprefix("/api/v3/urls/"))
            elif path == "/feed/blocklist.json":
                self._blocklist()
            elif path == "/_log":
                self._send(200, mock.request_log(), log=False)
            else:
                self._send(404, {"error": {"code": "NotFoundError", "message": "no such endpoint"}})

        def _report(self, report_id: str):
            fault = mock.next_fault()
            if fault is not None and fault != 200:
                if fault == "timeout":
                    time.sleep(30)
                    self._send(200, {})
                    return
                if isinstance(fault, dict) and "delay" in fault:
                    time.sleep(float(fault["delay"]))
                else:
                    self._send(int(fault), {"error": {"code": "TooManyRequests"}})
                    return
            if mock.require_api_key and not self.headers.get("x-apikey"):
                self._send(401, {"error": {"code": "AuthenticationRequiredError"}})
                return
            try:
                padded = report_id + "=" * (-len(report_id) % 4)
                url = base64.urlsafe_b64decode(padded.encode("ascii")).decode("utf-8")
            except (binascii.Error, UnicodeDecodeError):
                self._send(400, {"error": {"code": "BadRequestError", "message": "bad url id"}})
                return
            fixture = mock.fixture_dir / "reports" / url_fixture_name(url)
            if not fixture.exists():
                self._send(404, {"error": {"code": "NotFoundError", "message": "unknown resource"}})
                return
            self._send(200, json.loads(fixture.read_text(encoding="utf-8")))

        def _blocklist(self):
            feed_file = mock.fixture_dir / "blocklist.json"
            feed = json.loads(feed_file.read_text(encoding="utf-8")) if feed_file.exists() else []
            self._send(200, feed)

    return Handler
