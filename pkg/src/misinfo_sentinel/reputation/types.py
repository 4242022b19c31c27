"""Reputation report types and the scan policy."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ArgumentError

CATEGORIES = ("malicious", "benign", "undetected")
LISTED_VERIFIED = "listed_verified"
NOT_LISTED = "not_listed"

DAY_SECONDS = 86400


@dataclass(slots=True)
class EngineVerdict:
    engine: str
    category: str

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ArgumentError(f"bad verdict category {self.category!r}")


@dataclass
class ReputationReport:
    url: str
    scanned_at: int
    verdicts: list[EngineVerdict]
    source: str  # live | cache | fixture

    def __post_init__(self):
        engines = [v.engine for v in self.verdicts]
        if len(set(engines)) != len(engines):
            raise ArgumentError("engine names must be unique within a report")
        if self.source not in ("live", "cache", "fixture"):
            raise ArgumentError(f"bad report source {self.source!r}")

    @property
    def malicious_count(self) -> int:
        return sum(1 for v in self.verdicts if v.category == "malicious")

    @property
    def benign_count(self) -> int:
        return sum(1 for v in self.verdicts if v.category == "benign")

    def to_payload(self) -> dict:
        return {
            "url": self.url,
            "scanned_at": self.scanned_at,
            "source": self.source,
            "verdicts": [[v.engine, v.category] for v in self.verdicts],
            "malicious_count": self.malicious_count,
            "benign_count": self.benign_count,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "ReputationReport":
        return cls(
            url=payload["url"],
            scanned_at=payload["scanned_at"],
            verdicts=[EngineVerdict(e, c) for e, c in payload["verdicts"]],
            source=payload["source"],
        )


@dataclass
class ScanPolicy:
    recheck_delay_days: float = 21.0
    malicious_threshold: int = 1
    rate_limit_per_minute: int = 4
    max_retries: int = 3
    backoff_base: float = 1.0
    timeout: float = 10.0

    def __post_init__(self):
        for name in (
            "recheck_delay_days",
            "malicious_threshold",
            "rate_limit_per_minute",
            "max_retries",
            "backoff_base",
            "timeout",
        ):
            if getattr(self, name) <= 0:
                raise ArgumentError(f"policy field {name} must be positive")

    @property
    def recheck_delay_seconds(self) -> float:
        return self.recheck_delay_days * DAY_SECONDS

    @classmethod
    def from_dict(cls, d: dict) -> "ScanPolicy":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(**known)
