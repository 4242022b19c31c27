"""Scanning, rescanning, and URL classification."""

from __future__ import annotations

import time

from ..errors import ServiceUnavailableError
from .client import (
    BlocklistClient,
    RateLimiter,
    ScannerClient,
    TransientServiceError,
    UnknownUrlError,
)
from .store import ReportStore
from .types import LISTED_VERIFIED, NOT_LISTED, EngineVerdict, ReputationReport, ScanPolicy

# v3-style analysis categories mapped onto our three buckets
_CATEGORY_MAP = {"malicious": "malicious", "harmless": "benign"}


def parse_report_payload(url: str, payload: dict, fallback_time: int, source: str = "live") -> ReputationReport:
    """Build a report from a v3-style URL-report body."""
    attrs = payload.get("data", {}).get("attributes", {})
    results = attrs.get("last_analysis_results", {})
    verdicts = []
    for engine in sorted(results):
        category = _CATEGORY_MAP.get(results[engine].get("category"), "undetected")
        verdicts.append(EngineVerdict(engine=engine, category=category))
    scanned_at = int(attrs.get("last_analysis_date", fallback_time))
    return ReputationReport(url=url, scanned_at=scanned_at, verdicts=verdicts, source=source)


def scan_url(
    url: str,
    client: ScannerClient,
    policy: ScanPolicy,
    store: ReportStore,
    limiter: RateLimiter | None = None,
    now: int | None = None,
    sleeper=time.sleep,
) -> ReputationReport:
    """Return a cached report when fresh enough, else scan and persist.

    Transient failures (429, 5xx, timeouts) back off exponentially up to
    ``policy.max_retries`` extra attempts; an unknown URL yields an empty
    report, which is still persisted so the miss is on record.
    """
    if now is None:
        now = int(time.time())
    cached = store.latest(url)
    if cached is not None and now - cached.scanned_at < policy.recheck_delay_seconds:
        return ReputationReport(
            url=cached.url, scanned_at=cached.scanned_at, verdicts=cached.verdicts, source="cache"
        )

    attempts = 0
    while True:
        if limiter is not None:
            limiter.acquire()
        try:
            payload = client.url_report(url)
            report = parse_report_payload(url, payload, fallback_time=now)
            break
        except UnknownUrlError:
            report = ReputationReport(url=url, scanned_at=now, verdicts=[], source="live")
            break
        except TransientServiceError as exc:
            attempts += 1
            if attempts > policy.max_retries:
                raise ServiceUnavailableError(
                    f"scan of {url} failed after {policy.max_retries} retries: {exc}", url=url
                ) from exc
            sleeper(policy.backoff_base * 2 ** (attempts - 1))
    store.append(report)
    return report


def rescan_pending(
    urls,
    client: ScannerClient,
    policy: ScanPolicy,
    store: ReportStore,
    limiter: RateLimiter | None = None,
    now: int | None = None,
) -> list[ReputationReport]:
    """One-shot delayed rescan: scan every URL whose report went stale."""
    if now is None:
        now = int(time.time())
    refreshed = []
    for url in urls:
        latest = store.latest(url)
        if latest is None or now - latest.scanned_at >= policy.recheck_delay_seconds:
            refreshed.append(scan_url(url, client, policy, store, limiter, now=now))
    return refreshed


def blocklist_lookup(url: str, client: BlocklistClient) -> str:
    """``listed_verified`` when the community feed carries the URL."""
    return LISTED_VERIFIED if url in client.fetch_feed() else NOT_LISTED


def classify_url(report: ReputationReport, blocklist_status: str, policy: ScanPolicy) -> str:
    """malicious iff enough engines flagged it or the community list did."""
    if blocklist_status == LISTED_VERIFIED:
        return "malicious"
    if report.malicious_count >= policy.malicious_threshold:
        return "malicious"
    return "benign"
