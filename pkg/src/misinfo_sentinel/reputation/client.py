"""HTTP clients for the aggregate scanner and the community blocklist.

The scanner speaks a v3-style URL-report protocol: GET
``{base}/api/v3/urls/{id}`` where the id is the unpadded urlsafe base64 of
the URL, authenticated by an ``x-apikey`` header.  The blocklist is a
plain feed dump at ``{base}/feed/blocklist.json``: a JSON array of
``{"url": ..., "verified": ...}`` entries.  The same code path talks to
the live services and to the bundled mock server.
"""

from __future__ import annotations

import base64
import threading
import time
from collections import deque

import requests

from ..errors import CredentialError


class RateLimiter:
    """Sliding-window limiter: at most ``max_per_minute`` acquisitions in
    any 60-second window.  Safe for concurrent use; clock injectable.

    The window is padded by ``margin`` seconds on the client side so the
    limit also holds against *server-side* timestamps, which can drift a
    little earlier than our acquire stamps (connection reuse makes later
    requests arrive faster than the first).
    """

    def __init__(
        self,
        max_per_minute: int,
        clock=time.monotonic,
        sleeper=time.sleep,
        margin: float = 0.5,
    ):
        self.max_per_minute = max_per_minute
        self._window = 60.0 + margin
        self._clock = clock
        self._sleep = sleeper
        self._stamps: deque[float] = deque()
        self._lock = threading.Lock()

    def acquire(self):
        while True:
            with self._lock:
                now = self._clock()
                while self._stamps and now - self._stamps[0] >= self._window:
                    self._stamps.popleft()
                if len(self._stamps) < self.max_per_minute:
                    self._stamps.append(now)
                    return
                wait = self._window - (now - self._stamps[0])
            self._sleep(max(wait, 0.01))


def url_report_id(url: str) -> str:
    return base64.urlsafe_b64encode(url.encode("utf-8")).decode("ascii").rstrip("=")


class TransientServiceError(Exception):
    """Retryable failure: 429, 5xx, timeout, connection reset."""


class UnknownUrlError(Exception):
    """The service has never seen this URL (404-style response)."""


class ScannerClient:
    """Client for the aggregate URL scanner."""

    def __init__(self, base_url: str, api_key: str | None, timeout: float = 10.0, session=None):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.timeout = timeout
        self.session = session or requests.Session()

    def url_report(self, url: str) -> dict:
        """Raw report payload for ``url``; raises on auth/transient/404."""
        if not self.api_key:
            raise CredentialError("scanner API key is not configured")
        endpoint = f"{self.base_url}/api/v3/urls/{url_report_id(url)}"
        try:
            resp = self.session.get(endpoint, headers={"x-apikey": self.api_key}, timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransientServiceError(str(exc)) from exc
        if resp.status_code in (401, 403):
            raise CredentialError(f"scanner rejected credentials ({resp.status_code})")
        if resp.status_code == 404:
            raise UnknownUrlError(url)
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientServiceError(f"status {resp.status_code}")
        resp.raise_for_status()
        return resp.json()


class BlocklistClient:
    """Client for the community blocklist feed dump (fetched once, cached)."""

    def __init__(self, base_url: str, timeout: float = 10.0, session=None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.session = session or requests.Session()
        self._feed: set[str] | None = None

    def fetch_feed(self) -> set[str]:
        if self._feed is not None:
            return self._feed
        endpoint = f"{self.base_url}/feed/blocklist.json"
        try:
            resp = self.session.get(endpoint, timeout=self.timeout)
            resp.raise_for_status()
            entries = resp.json()
        except requests.RequestException as exc:
            raise TransientServiceError(str(exc)) from exc
        self._feed = {
            e["url"]
            for e in entries
            if str(e.get("verified", "")).lower() in ("yes", "true", "1")
        }
        return self._feed


class FixtureBlocklist(BlocklistClient):
    """Blocklist backed by an in-memory feed; used by tests and dry runs."""

    def __init__(self, verified_urls):
        self._feed = set(verified_urls)

    def fetch_feed(self) -> set[str]:
        return self._feed
