"""URL reputation: scanner/blocklist clients, cache, and classification."""

from .client import (
    BlocklistClient,
    FixtureBlocklist,
    RateLimiter,
    ScannerClient,
    TransientServiceError,
    UnknownUrlError,
    url_report_id,
)
from .review import ReviewOverride, apply_overrides, export_review_queue, import_review
from .scan import blocklist_lookup, classify_url, parse_report_payload, rescan_pending, scan_url
from .store import ReportStore
from .types import (
    LISTED_VERIFIED,
    NOT_LISTED,
    EngineVerdict,
    ReputationReport,
    ScanPolicy,
)

__all__ = [
    "BlocklistClient",
    "EngineVerdict",
    "FixtureBlocklist",
    "LISTED_VERIFIED",
    "NOT_LISTED",
    "RateLimiter",
    "ReportStore",
    "ReputationReport",
    "ReviewOverride",
    "ScanPolicy",
    "ScannerClient",
    "TransientServiceError",
    "UnknownUrlError",
    "apply_overrides",
    "blocklist_lookup",
    "classify_url",
    "export_review_queue",
    "import_review",
    "parse_report_payload",
    "rescan_pending",
    "scan_url",
    "url_report_id",
]
