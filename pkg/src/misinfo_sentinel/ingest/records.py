"""Normalized post and account records shared by every pipeline stage.

Source files are line-delimited JSON in per-platform shapes; loaders map
them onto the common :class:`Post` / :class:`Account` types below.  The
normalized form round-trips losslessly through :func:`write_posts` /
:func:`read_posts`, which is what pipeline checkpoints use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Iterator

from ..errors import ValidationError

PLATFORMS = ("twitter", "facebook", "instagram", "reddit")


def parse_timestamp(value) -> int:
    """Accept epoch seconds or an ISO-8601 string; return UTC epoch seconds."""
    if isinstance(value, bool):
        raise ValidationError(f"not a timestamp: {value!r}")
    if isinstance(value, (int, float)):
        return int(value)
    text = str(value).strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ValidationError(f"bad timestamp {value!r}: {exc}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def format_timestamp(epoch: int) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _check_count(name: str, value) -> int | None:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer count, got {value!r}")
    if value < 0:
        raise ValidationError(f"{name} must be >= 0, got {value}")
    return value


@dataclass(slots=True)
class ReactionCounts:
    """Reaction tallies; ``None`` means the platform did not report the field."""

    likes: int | None = None
    shares: int | None = None
    comments: int | None = None

    def __post_init__(self):
        self.likes = _check_count("likes", self.likes)
        self.shares = _check_count("shares", self.shares)
        self.comments = _check_count("comments", self.comments)


@dataclass(slots=True)
class Post:
    """One normalized social-media post."""

    id: str
    platform: str
    author_id: str
    created_at: int
    text: str
    language: str | None = None
    has_media: bool = False
    urls: list[str] = field(default_factory=list)
    reactions: ReactionCounts = field(default_factory=ReactionCounts)
    retweet_of: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValidationError("post id must be non-empty")
        if self.platform not in PLATFORMS:
            raise ValidationError(f"unknown platform {self.platform!r}")

    def to_record(self) -> dict:
        rec = {
            "id": self.id,
            "platform": self.platform,
            "author": self.author_id,
            "created_at": format_timestamp(self.created_at),
            "text": self.text,
        }
        if self.language is not None:
            rec["lang"] = self.language
        if self.has_media:
            rec["has_media"] = True
        if self.urls:
            rec["urls"] = list(self.urls)
        for key, value in (
            ("like_count", self.reactions.likes),
            ("share_count", self.reactions.shares),
            ("comment_count", self.reactions.comments),
        ):
            if value is not None:
                rec[key] = value
        if self.retweet_of is not None:
            rec["retweet_of"] = self.retweet_of
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "Post":
        return cls(
            id=str(rec["id"]),
            platform=rec["platform"],
            author_id=str(rec["author"]),
            created_at=parse_timestamp(rec["created_at"]),
            text=rec["text"],
            language=rec.get("lang"),
            has_media=bool(rec.get("has_media", False)),
            urls=list(rec.get("urls", [])),
            reactions=ReactionCounts(
                likes=rec.get("like_count"),
                shares=rec.get("share_count"),
                comments=rec.get("comment_count"),
            ),
            retweet_of=rec.get("retweet_of"),
        )


@dataclass(slots=True)
class Account:
    """A platform account as seen at collection time."""

    id: str
    platform: str
    followers_count: int = 0
    friends_count: int = 0
    statuses_count: int = 0
    listed_count: int = 0
    verified: bool = False
    created_at: int = 0
    profile_description: str = ""
    has_url: bool = False
    has_profile_image: bool = False
    protected: bool = False

    def __post_init__(self):
        if not self.id:
            raise ValidationError("account id must be non-empty")
        if self.platform not in PLATFORMS:
            raise ValidationError(f"unknown platform {self.platform!r}")
        for name in ("followers_count", "friends_count", "statuses_count", "listed_count"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0")

    def account_age_years(self, reference: int) -> int:
        """Whole years between account creation and ``reference`` (clamped at 0)."""
        ref = datetime.fromtimestamp(reference, tz=timezone.utc)
        created = datetime.fromtimestamp(self.created_at, tz=timezone.utc)
        years = ref.year - created.year
        if (ref.month, ref.day) < (created.month, created.day):
            years -= 1
        return max(years, 0)

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "platform": self.platform,
            "followers_count": self.followers_count,
            "friends_count": self.friends_count,
            "statuses_count": self.statuses_count,
            "listed_count": self.listed_count,
            "verified": self.verified,
            "created_at": format_timestamp(self.created_at),
            "description": self.profile_description,
            "has_url": self.has_url,
            "has_profile_image": self.has_profile_image,
            "protected": self.protected,
        }

    @classmethod
    def from_record(cls, rec: dict, platform: str | None = None) -> "Account":
        return cls(
            id=str(rec["id"]),
            platform=platform or rec["platform"],
            followers_count=int(rec.get("followers_count", 0)),
            friends_count=int(rec.get("friends_count", 0)),
            statuses_count=int(rec.get("statuses_count", rec.get("post_count", 0))),
            listed_count=int(rec.get("listed_count", 0)),
            verified=bool(rec.get("verified", False)),
            created_at=parse_timestamp(rec.get("created_at", 0)),
            profile_description=rec.get("description", ""),
            has_url=bool(rec.get("has_url", rec.get("url"))),
            has_profile_image=bool(rec.get("has_profile_image", False)),
            protected=bool(rec.get("protected", False)),
        )


def write_posts(path, posts: Iterable[Post]) -> int:
    """Write posts in the normalized line-delimited form; returns the count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for post in posts:
            fh.write(json.dumps(post.to_record(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")
            n += 1
    return n


def read_posts(path) -> Iterator[Post]:
    """Read posts written by :func:`write_posts`."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield Post.from_record(json.loads(line))
