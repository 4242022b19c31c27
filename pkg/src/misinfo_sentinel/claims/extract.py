"""Extraction of defanged-URL claims from post text.

A claim span starts at a (possibly defanged) scheme token and extends
through URL-legal characters and defang tokens; the span is maximal.  A
span only becomes a claim if at least one refang rule fired: a plain,
unobfuscated URL is not a phishing claim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urlsplit

from ..errors import ValidationError
from ..ingest.records import Post
from .refang import RefangRule, canonicalize_url, load_rules, refang

_SCHEME_RE = re.compile(r"(?<![a-zA-Z0-9])h(?:xx|XX|tt|TT)ps?", re.IGNORECASE)
_URL_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyz"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "0123456789"
    "-._~:/?#@!$&'*+,;=%()"
)


@dataclass(slots=True)
class UrlClaim:
    """A post-level phishing claim about one URL."""

    post_id: str
    raw_match: str
    canonical_url: str
    patterns_applied: list[str]
    host: str = ""

    def __post_init__(self):
        if not self.patterns_applied:
            raise ValidationError("a claim must have at least one refang rule applied")
        parts = urlsplit(self.canonical_url)
        if parts.scheme not in ("http", "https") or not parts.hostname:
            raise ValidationError(f"claim url {self.canonical_url!r} is not absolute http/https")
        if not self.host:
            self.host = parts.hostname

    def to_record(self) -> dict:
        return {
            "post_id": self.post_id,
            "raw_match": self.raw_match,
            "canonical_url": self.canonical_url,
            "patterns_applied": list(self.patterns_applied),
            "host": self.host,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "UrlClaim":
        return cls(
            post_id=rec["post_id"],
            raw_match=rec["raw_match"],
            canonical_url=rec["canonical_url"],
            patterns_applied=list(rec["patterns_applied"]),
            host=rec.get("host", ""),
        )


def _scan_span(text: str, start: int, token_patterns: list[re.Pattern]) -> int:
    """Return the end index of the maximal URL span beginning at ``start``."""
    pos = start
    n = len(text)
    while pos < n:
        for pattern in token_patterns:
            m = pattern.match(text, pos)
            if m:
                pos = m.end()
                break
        else:
            if text[pos] in _URL_CHARS:
                pos += 1
            else:
                break
    return pos


def find_defanged_spans(text: str, rules: tuple[RefangRule, ...] | None = None) -> list[tuple[int, int]]:
    """All maximal candidate spans in ``text`` (defanged or plain URLs)."""
    if rules is None:
        rules = load_rules()
    token_patterns = [r.regex for r in rules if not r.pattern.isalnum()]
    spans = []
    pos = 0
    while True:
        m = _SCHEME_RE.search(text, pos)
        if not m:
            break
        end = _scan_span(text, m.end(), token_patterns)
        spans.append((m.start(), end))
        pos = end
    return spans


def extract_claims(post: Post, diagnostics: list[str] | None = None) -> list[UrlClaim]:
    """Extract one claim per maximal defanged-URL match in the post text.

    Spans whose refanged form fails URL validation are dropped with a
    diagnostic; spans with no defang pattern at all are silently ignored.
    """
    claims = []
    for start, end in find_defanged_spans(post.text):
        raw = post.text[start:end]
        result = refang(raw)
        if not result.applied:
            continue
        try:
            canonical = canonicalize_url(result.text)
        except ValidationError as exc:
            if diagnostics is not None:
                diagnostics.append(f"post {post.id}: {exc}")
            continue
        claims.append(
            UrlClaim(
                post_id=post.id,
                raw_match=raw,
                canonical_url=canonical,
                patterns_applied=result.applied,
            )
        )
    return claims


def unique_urls(claims: list[UrlClaim]) -> dict[str, list[str]]:
    """Group claims by canonical URL, ordered by first appearance."""
    grouped: dict[str, list[str]] = {}
    for claim in claims:
        grouped.setdefault(claim.canonical_url, []).append(claim.post_id)
    return grouped
