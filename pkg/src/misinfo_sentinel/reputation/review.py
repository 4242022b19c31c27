"""Manual-review worksheet export and analyst override import.

Benign, unlisted URLs go to a CSV worksheet with a screenshot slot; the
analyst fills the verdict column, and importing the worksheet applies the
overrides with an append-only audit trail.  Re-importing the same file is
a no-op: an override already on record is not audited twice.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass

from ..errors import ValidationError

WORKSHEET_FIELDS = ("url", "first_seen_post", "screenshot", "verdict", "notes")
_VALID_VERDICTS = ("malicious", "benign")


@dataclass(slots=True)
class ReviewOverride:
    url: str
    verdict: str
    notes: str = ""


def export_review_queue(urls_with_first_post: list[tuple[str, str]], path) -> int:
    """Write the review worksheet; returns the row count."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=WORKSHEET_FIELDS)
        writer.writeheader()
        for url, first_post in urls_with_first_post:
            writer.writerow(
                {"url": url, "first_seen_post": first_post, "screenshot": "", "verdict": "", "notes": ""}
            )
    return len(urls_with_first_post)


def import_review(path) -> list[ReviewOverride]:
    """Read analyst verdicts; all malformed rows are reported together."""
    overrides = []
    problems = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [f for f in WORKSHEET_FIELDS if f not in (reader.fieldnames or [])]
        if missing:
            raise ValidationError(f"review file {path} is missing columns: {missing}")
        for row_no, row in enumerate(reader, start=2):
            verdict = (row.get("verdict") or "").strip().lower()
            url = (row.get("url") or "").strip()
            if not verdict:
                continue  # not reviewed yet
            if not url:
                problems.append(f"row {row_no}: verdict without a url")
                continue
            if verdict not in _VALID_VERDICTS:
                problems.append(f"row {row_no}: bad verdict {verdict!r}")
                continue
            overrides.append(ReviewOverride(url=url, verdict=verdict, notes=row.get("notes", "")))
    if problems:
        raise ValidationError("invalid review rows: " + "; ".join(problems))
    return overrides


def apply_overrides(
    labels: dict[str, str],
    overrides: list[ReviewOverride],
    audit_path=None,
    now: int | None = None,
) -> dict[str, str]:
    """Apply verdict overrides to the URL label map, audit-stamped."""
    existing = set()
    if audit_path is not None:
        try:
            with open(audit_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        existing.add((rec["url"], rec["verdict"]))
        except FileNotFoundError:
            pass
    updated = dict(labels)
    new_rows = []
    for ov in overrides:
        previous = updated.get(ov.url)
        updated[ov.url] = ov.verdict
        if (ov.url, ov.verdict) not in existing:
            new_rows.append(
                {
                    "url": ov.url,
                    "verdict": ov.verdict,
                    "previous": previous,
                    "source": "manual_review",
                    "notes": ov.notes,
                    "imported_at": now if now is not None else int(time.time()),
                }
            )
            existing.add((ov.url, ov.verdict))
    if audit_path is not None and new_rows:
        with open(audit_path, "a", encoding="utf-8") as fh:
            for rec in new_rows:
                fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True))
                fh.write("\n")
    return updated
