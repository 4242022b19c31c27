"""Keyword, window, and language filtering of post streams.

Keyword matching is case-insensitive on NFC-normalized text.  Composite
keywords ("zoom security bug") must appear as adjacent word tokens, in
order; matching is implemented over a single-space token rendering of the
text so that punctuation and line breaks between words do not matter.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from typing import Iterable, Iterator

from ..errors import ArgumentError
from .records import Post

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass
class KeywordSet:
    """Seed keywords plus everything accepted during snowball expansion."""

    seeds: list[str]
    accepted: list[str] = field(default_factory=list)
    rejected: list[str] = field(default_factory=list)
    rounds: int = 0

    def __post_init__(self):
        self.seeds = [normalize_keyword(k) for k in self.seeds]
        self.accepted = [normalize_keyword(k) for k in self.accepted]
        if not self.accepted:
            self.accepted = list(self.seeds)
        seen = set()
        for kw in self.accepted:
            if kw in seen:
                raise ArgumentError(f"duplicate keyword {kw!r}")
            seen.add(kw)
        missing = [s for s in self.seeds if s not in seen]
        if missing:
            raise ArgumentError(f"seeds missing from accepted set: {missing}")

    @classmethod
    def from_file(cls, path) -> "KeywordSet":
        """One keyword per line; blank lines and ``#`` comments are ignored."""
        keywords = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    keywords.append(line)
        if not keywords:
            raise ArgumentError(f"no keywords in {path}")
        return cls(seeds=keywords)


def normalize_keyword(keyword: str) -> str:
    tokens = _WORD_RE.findall(unicodedata.normalize("NFC", keyword).casefold())
    if not tokens:
        raise ArgumentError(f"keyword {keyword!r} has no word characters")
    return " ".join(tokens)


def normalize_text(text: str) -> str:
    """Single-space rendering of the word tokens of ``text``, casefolded."""
    return " ".join(_WORD_RE.findall(unicodedata.normalize("NFC", text).casefold()))


class KeywordMatcher:
    """Compiled matcher for a keyword set; reusable across a whole stream."""

    def __init__(self, keywords: Iterable[str]):
        normalized = sorted({normalize_keyword(k) for k in keywords})
        if not normalized:
            raise ArgumentError("keyword set is empty")
        alternation = "|".join(re.escape(k) for k in normalized)
        self._re = re.compile(rf"(?:^|(?<= ))(?:{alternation})(?=$| )")

    def matches(self, text: str) -> bool:
        return self._re.search(normalize_text(text)) is not None


def parse_window(spec: str) -> tuple[int, int]:
    """Parse ``YYYY-MM-DD..YYYY-MM-DD`` into an inclusive epoch-second window."""
    try:
        start_s, end_s = spec.split("..")
        start = date.fromisoformat(start_s.strip())
        end = date.fromisoformat(end_s.strip())
    except ValueError as exc:
        raise ArgumentError(f"bad window {spec!r}: {exc}") from None
    start_ts = int(datetime(start.year, start.month, start.day, tzinfo=timezone.utc).timestamp())
    end_ts = int(datetime(end.year, end.month, end.day, 23, 59, 59, tzinfo=timezone.utc).timestamp())
    return _check_window(start_ts, end_ts)


def _check_window(start: int, end: int) -> tuple[int, int]:
    if start > end:
        raise ArgumentError(f"window start {start} is after end {end}")
    return (start, end)


def filter_posts(
    posts: Iterable[Post],
    keywords: KeywordSet | Iterable[str],
    window: tuple[int, int] | None = None,
    same_day: bool = False,
    ingestion_date: date | None = None,
) -> list[Post]:
    """Retain posts containing at least one keyword inside the time window.

    With ``same_day``, only posts created on the ingestion calendar date
    (UTC) survive; ``ingestion_date`` defaults to today.
    """
    terms = keywords.accepted if isinstance(keywords, KeywordSet) else list(keywords)
    matcher = KeywordMatcher(terms)
    if window is not None:
        window = _check_window(*window)
    if same_day and ingestion_date is None:
        ingestion_date = datetime.now(tz=timezone.utc).date()

    kept = []
    for post in posts:
        if window is not None and not (window[0] <= post.created_at <= window[1]):
            continue
        if same_day:
            created = datetime.fromtimestamp(post.created_at, tz=timezone.utc).date()
            if created != ingestion_date:
                continue
        if matcher.matches(post.text):
            kept.append(post)
    return kept


def filter_language(
    posts: Iterable[Post],
    keep: tuple[str, ...] = ("en",),
    keep_untagged: bool = True,
) -> Iterator[Post]:
    """Keep posts whose source language tag matches, trusting source tags."""
    prefixes = tuple(lang.lower() for lang in keep)
    for post in posts:
        if post.language is None or post.language == "":
            if keep_untagged:
                yield post
            continue
        tag = post.language.lower()
        if tag.startswith(prefixes):
            yield post


def drop_retweets(posts: Iterable[Post]) -> Iterator[Post]:
    """Optional deduplication: drop posts that are plain reshares."""
    for post in posts:
        if post.retweet_of is None:
            yield post
