"""Append-only report store on sqlite, keyed by canonical URL.

Every scan is kept (history is never rewritten); the freshest report wins
for classification.  A single connection guarded by a lock keeps the
store safe for concurrent scan workers.
"""

from __future__ import annotations

import json
import sqlite3
import threading

from .types import ReputationReport

_SCHEMA = """
CREATE TABLE IF NOT EXISTS reports (
    rowid INTEGER PRIMARY KEY AUTOINCREMENT,
    url TEXT NOT NULL,
    scanned_at INTEGER NOT NULL,
    payload TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_reports_url ON reports (url, scanned_at);
"""


class ReportStore:
    def __init__(self, path=":memory:"):
        self._conn = sqlite3.connect(str(path), check_same_thread=False)
        self._lock = threading.Lock()
        with self._lock:
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def append(self, report: ReputationReport):
        payload = json.dumps(report.to_payload(), ensure_ascii=False, sort_keys=True)
        with self._lock:
            self._conn.execute(
                "INSERT INTO reports (url, scanned_at, payload) VALUES (?, ?, ?)",
                (report.url, report.scanned_at, payload),
            )
            self._conn.commit()

    def latest(self, url: str) -> ReputationReport | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT payload FROM reports WHERE url = ? ORDER BY scanned_at DESC, rowid DESC LIMIT 1",
                (url,),
            ).fetchone()
        return ReputationReport.from_payload(json.loads(row[0])) if row else None

    def history(self, url: str) -> list[ReputationReport]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT payload FROM reports WHERE url = ? ORDER BY scanned_at, rowid",
                (url,),
            ).fetchall()
        return [ReputationReport.from_payload(json.loads(r[0])) for r in rows]

    def urls(self) -> list[str]:
        with self._lock:
            rows = self._conn.execute("SELECT DISTINCT url FROM reports ORDER BY url").fetchall()
        return [r[0] for r in rows]

    def close(self):
        with self._lock:
            self._conn.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
