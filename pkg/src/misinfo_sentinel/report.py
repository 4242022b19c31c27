"""Summary tables and growth series over classifier predictions.

Percentages are kept at one decimal internally and rounded to integers in
the human-readable table.  Growth series are normalized per platform
(misinformation share of that platform's relevant posts per bucket); a
bucket with no relevant posts yields a null point, never a fake zero.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Sequence

from .errors import ArgumentError, ValidationError
from .ingest.records import format_timestamp, parse_timestamp


@dataclass(slots=True)
class PredictionRecord:
    """One post after both classifier stages."""

    post_id: str
    platform: str
    author_id: str
    created_at: int
    relevant: bool  # stage 1: discusses the topic's security/privacy
    misinformation: bool | None  # stage 2; None when stage 1 said irrelevant

    def __post_init__(self):
        if self.relevant and self.misinformation is None:
            raise ValidationError(f"post {self.post_id}: relevant but no stage-2 verdict")
        if not self.relevant and self.misinformation is not None:
            raise ValidationError(f"post {self.post_id}: stage-2 verdict on an irrelevant post")

    def to_record(self) -> dict:
        return {
            "post_id": self.post_id,
            "platform": self.platform,
            "author": self.author_id,
            "created_at": format_timestamp(self.created_at),
            "relevant": self.relevant,
            "misinformation": self.misinformation,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PredictionRecord":
        return cls(
            post_id=rec["post_id"],
            platform=rec["platform"],
            author_id=rec["author"],
            created_at=parse_timestamp(rec["created_at"]),
            relevant=bool(rec["relevant"]),
            misinformation=rec["misinformation"],
        )


def _pct(part: int, whole: int) -> float:
    return round(100.0 * part / whole, 1) if whole else 0.0


@dataclass
class PlatformSummary:
    platform: str
    total: int
    relevant_count: int
    relevant_pct: float
    misinfo_count: int
    misinfo_pct: float  # share of the platform's relevant posts
    unique_misinfo_users: int

    def human_row(self) -> dict:
        return {
            "platform": self.platform,
            "total": f"{self.total:,}",
            "security & privacy": f"{self.relevant_count:,} ({round(self.relevant_pct)}%)",
            "misinformation": f"{self.misinfo_count:,} ({round(self.misinfo_pct)}%)",
            "unique misinfo users": f"{self.unique_misinfo_users:,}",
        }


def platform_summary(predictions: Iterable[PredictionRecord]) -> list[PlatformSummary]:
    """Per-platform relevance and misinformation shares."""
    by_platform: dict[str, list[PredictionRecord]] = {}
    for pred in predictions:
        by_platform.setdefault(pred.platform, []).append(pred)
    rows = []
    for platform in sorted(by_platform):
        preds = by_platform[platform]
        relevant = [p for p in preds if p.relevant]
        misinfo = [p for p in relevant if p.misinformation]
        rows.append(
            PlatformSummary(
                platform=platform,
                total=len(preds),
                relevant_count=len(relevant),
                relevant_pct=_pct(len(relevant), len(preds)),
                misinfo_count=len(misinfo),
                misinfo_pct=_pct(len(misinfo), len(relevant)),
                unique_misinfo_users=len({p.author_id for p in misinfo}),
            )
        )
    return rows


@dataclass
class GrowthPoint:
    bucket: str  # e.g. "2020-03"
    relevant: int
    misinfo: int
    pct: float | None  # None when the bucket has no relevant posts


@dataclass
class GrowthSeries:
    bucket: str
    series: dict[str, list[GrowthPoint]]
    markers: list[str] = field(default_factory=list)
    normalization: str = "per-platform share of relevant posts"


def _month_key(epoch: int) -> str:
    dt = datetime.fromtimestamp(epoch, tz=timezone.utc)
    return f"{dt.year:04d}-{dt.month:02d}"


def _next_month(key: str) -> str:
    year, month = map(int, key.split("-"))
    month += 1
    if month == 13:
        year, month = year + 1, 1
    return f"{year:04d}-{month:02d}"


def growth_series(
    predictions: Iterable[PredictionRecord],
    bucket: str = "month",
    markers: Sequence[str] = (),
) -> GrowthSeries:
    """Per-platform misinformation share over calendar-month buckets."""
    if bucket != "month":
        raise ArgumentError(f"unsupported bucket {bucket!r}")
    per: dict[str, dict[str, list[int]]] = {}
    for pred in predictions:
        key = _month_key(pred.created_at)
        cell = per.setdefault(pred.platform, {}).setdefault(key, [0, 0])
        if pred.relevant:
            cell[0] += 1
            if pred.misinformation:
                cell[1] += 1
    series: dict[str, list[GrowthPoint]] = {}
    for platform in sorted(per):
        buckets = per[platform]
        lo, hi = min(buckets), max(buckets)
        points = []
        key = lo
        while True:
            relevant, misinfo = buckets.get(key, (0, 0))
            pct = round(100.0 * misinfo / relevant, 1) if relevant else None
            points.append(GrowthPoint(bucket=key, relevant=relevant, misinfo=misinfo, pct=pct))
            if key == hi:
                break
            key = _next_month(key)
        series[platform] = points
    return GrowthSeries(bucket=bucket, series=series, markers=list(markers))


def write_summary_csv(rows: Sequence[PlatformSummary], path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "platform",
                "total",
                "relevant_count",
                "relevant_pct",
                "misinfo_count",
                "misinfo_pct",
                "unique_misinfo_users",
            ]
        )
        for r in rows:
            writer.writerow(
                [r.platform, r.total, r.relevant_count, r.relevant_pct, r.misinfo_count, r.misinfo_pct, r.unique_misinfo_users]
            )


def write_growth_csv(growth: GrowthSeries, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        fh.write(f"# normalization: {growth.normalization}\n")
        writer.writerow(["platform", "bucket", "relevant", "misinfo", "pct"])
        for platform, points in growth.series.items():
            for p in points:
                writer.writerow([platform, p.bucket, p.relevant, p.misinfo, "" if p.pct is None else p.pct])


def write_plot_description(growth: GrowthSeries, path, title: str = "Misinformation share over time"):
    """Self-contained plot description; rendering is external tooling's job."""
    payload = {
        "title": title,
        "x": {"label": "calendar month", "type": "category"},
        "y": {"label": "% misinformation among relevant posts", "normalization": growth.normalization},
        "markers": growth.markers,
        "series": {
            platform: [
                {"bucket": p.bucket, "relevant": p.relevant, "misinfo": p.misinfo, "pct": p.pct}
                for p in points
            ]
            for platform, points in growth.series.items()
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=1, sort_keys=True)
        fh.write("\n")


def read_predictions(path) -> list[PredictionRecord]:
    preds = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                preds.append(PredictionRecord.from_record(json.loads(line)))
    return preds


def write_predictions(path, predictions: Sequence[PredictionRecord]):
    with open(path, "w", encoding="utf-8") as fh:
        for pred in predictions:
            fh.write(json.dumps(pred.to_record(), ensure_ascii=False, sort_keys=True) + "\n")
