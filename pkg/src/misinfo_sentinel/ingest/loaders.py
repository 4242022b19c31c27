"""Per-platform loaders for line-delimited post and account files.

Each platform ships records with its own field names; the maps below pull
them onto the common types.  Malformed lines are reported as diagnostics
with their line number and skipped unless ``strict`` is set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from ..errors import ValidationError
from .records import PLATFORMS, Account, Post, ReactionCounts, parse_timestamp


@dataclass(slots=True)
class Diagnostic:
    line_no: int
    message: str

    def __str__(self):
        return f"line {self.line_no}: {self.message}"


def _twitter_post(rec: dict) -> Post:
    return Post(
        id=str(rec["id"]),
        platform="twitter",
        author_id=str(rec["author"]),
        created_at=parse_timestamp(rec["created_at"]),
        text=rec["text"],
        language=rec.get("lang"),
        has_media=bool(rec.get("has_media", False)),
        urls=list(rec.get("urls", [])),
        reactions=ReactionCounts(
            likes=rec.get("like_count"),
            shares=rec.get("retweet_count"),
            comments=rec.get("reply_count"),
        ),
        retweet_of=rec.get("retweet_of"),
    )


def _facebook_post(rec: dict) -> Post:
    return Post(
        id=str(rec["id"]),
        platform="facebook",
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
    )


def _instagram_post(rec: dict) -> Post:
    return Post(
        id=str(rec["id"]),
        platform="instagram",
        author_id=str(rec["author"]),
        created_at=parse_timestamp(rec["created_at"]),
        text=rec.get("text", rec.get("caption", "")),
        language=rec.get("lang"),
        has_media=bool(rec.get("has_media", True)),
        urls=list(rec.get("urls", [])),
        reactions=ReactionCounts(
            likes=rec.get("like_count"),
            comments=rec.get("comment_count"),
        ),
    )


def _reddit_post(rec: dict) -> Post:
    if "text" in rec:
        text = rec["text"]
    else:
        title = rec.get("title", "")
        body = rec.get("selftext", "")
        text = f"{title}\n\n{body}" if body else title
    return Post(
        id=str(rec["id"]),
        platform="reddit",
        author_id=str(rec["author"]),
        created_at=parse_timestamp(rec["created_at"]),
        text=text,
        language=rec.get("lang"),
        has_media=bool(rec.get("has_media", False)),
        urls=list(rec.get("urls", [])),
        reactions=ReactionCounts(
            likes=rec.get("score", rec.get("like_count")),
            comments=rec.get("comment_count"),
        ),
    )


_POST_PARSERS = {
    "twitter": _twitter_post,
    "facebook": _facebook_post,
    "instagram": _instagram_post,
    "reddit": _reddit_post,
}


def load_posts(
    path,
    platform: str,
    diagnostics: list[Diagnostic] | None = None,
    strict: bool = False,
) -> Iterator[Post]:
    """Stream posts from a line-delimited file in ``platform`` record shape.

    Malformed lines are appended to ``diagnostics`` (if given) and skipped;
    with ``strict`` they raise instead.  An unreadable file raises at once.
    """
    if platform not in PLATFORMS:
        raise ValidationError(f"unknown platform {platform!r}")
    parser = _POST_PARSERS[platform]
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                if not isinstance(rec, dict):
                    raise ValidationError("record is not an object")
                post = parser(rec)
                if post.id in seen_ids:
                    raise ValidationError(f"duplicate post id {post.id!r}")
                seen_ids.add(post.id)
                yield post
            except (json.JSONDecodeError, KeyError, TypeError, ValidationError) as exc:
                if strict:
                    raise ValidationError(f"{path}: line {line_no}: {exc}") from exc
                if diagnostics is not None:
                    diagnostics.append(Diagnostic(line_no, str(exc)))


def load_accounts(
    path,
    platform: str,
    diagnostics: list[Diagnostic] | None = None,
) -> Iterator[Account]:
    """Stream accounts from a line-delimited file; same error policy as posts."""
    if platform not in PLATFORMS:
        raise ValidationError(f"unknown platform {platform!r}")
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield Account.from_record(json.loads(line), platform=platform)
            except (json.JSONDecodeError, KeyError, TypeError, ValidationError) as exc:
                if diagnostics is not None:
                    diagnostics.append(Diagnostic(line_no, str(exc)))
