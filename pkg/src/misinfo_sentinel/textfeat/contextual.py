"""Contextual (non-textual) features per platform.

Every platform computes the taxonomy-inspired base set; reaction features
differ per platform, and Twitter adds account characteristics plus media/
URL presence.  Fields a platform can leave unknown are imputed to 0 and
accompanied by a ``*_missing`` flag so the classifier can tell imputed
zeros from real ones.
"""

from __future__ import annotations

import re

from ..errors import ArgumentError
from ..ingest.records import Account, Post
from .preprocess import noun_lexicon, pronoun_list, spelling_dictionary, strip_markup

_ALPHA_TOKEN_RE = re.compile(r"[^\W\d_]+", re.UNICODE)
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

BASE_FEATURES = (
    "word_count",
    "noun_count",
    "pronoun_count",
    "all_caps_count",
    "misspelled_count",
    "verified",
    "followers_count",
)

# Reaction features per platform (Twitter reactions were not predictive).
REACTION_FEATURES = {
    "instagram": ("likes",),
    "facebook": ("likes", "comments", "shares"),
    "reddit": ("likes", "comments"),
    "twitter": (),
}

ACCOUNT_FEATURES = (
    "has_media",
    "has_url",
    "tweets_count",
    "profile_description_length",
    "account_age_years",
    "listed_count",
    "has_profile_image",
)

# Features that can be unknown at the source and carry a *_missing flag.
_FLAGGED = {
    "verified",
    "followers_count",
    "likes",
    "comments",
    "shares",
    "tweets_count",
    "profile_description_length",
    "account_age_years",
    "listed_count",
    "has_profile_image",
}


def feature_names(platform: str) -> list[str]:
    """Ordered contextual feature names (flags follow their feature)."""
    if platform not in REACTION_FEATURES:
        raise ArgumentError(f"unknown platform {platform!r}")
    names = list(BASE_FEATURES) + list(REACTION_FEATURES[platform])
    if platform == "twitter":
        names += list(ACCOUNT_FEATURES)
    out = []
    for name in names:
        out.append(name)
        if name in _FLAGGED:
            out.append(name + "_missing")
    return out


def _put(features: dict[str, float], name: str, value: float | None):
    if name in _FLAGGED:
        features[name] = float(value) if value is not None else 0.0
        features[name + "_missing"] = 0.0 if value is not None else 1.0
    else:
        features[name] = float(value or 0.0)


def all_caps_count(text: str) -> int:
    """Words of >= 2 letters written entirely in uppercase.

    URLs, mentions, and hashtags are stripped first so tokens inside them
    never count as shouting.
    """
    count = 0
    for token in _ALPHA_TOKEN_RE.findall(strip_markup(text)):
        if len(token) >= 2 and token == token.upper() and token != token.lower():
            count += 1
    return count


def misspelled_count(text: str) -> int:
    """Alphabetic words (>= 2 letters) absent from the shipped dictionary;
    URL/mention/hashtag tokens are stripped before counting."""
    dictionary = spelling_dictionary()
    count = 0
    for token in _ALPHA_TOKEN_RE.findall(strip_markup(text)):
        if len(token) >= 2 and token.casefold() not in dictionary:
            count += 1
    return count


def contextual_features(
    post: Post,
    account: Account | None,
    platform: str | None = None,
    reference_time: int | None = None,
) -> dict[str, float]:
    """Named contextual feature map for one post.

    ``reference_time`` anchors the account-age computation and defaults to
    the post timestamp so feature extraction stays reproducible.
    """
    platform = platform or post.platform
    if platform not in REACTION_FEATURES:
        raise ArgumentError(f"unknown platform {platform!r}")
    text = post.text
    tokens = [t.casefold() for t in _WORD_RE.findall(strip_markup(text))]
    nouns = noun_lexicon()
    pronouns = pronoun_list()

    features: dict[str, float] = {
        "word_count": float(len(text.split())),
        "noun_count": float(sum(1 for t in tokens if t in nouns)),
        "pronoun_count": float(sum(1 for t in tokens if t in pronouns)),
        "all_caps_count": float(all_caps_count(text)),
        "misspelled_count": float(misspelled_count(text)),
    }
    _put(features, "verified", float(account.verified) if account else None)
    _put(features, "followers_count", account.followers_count if account else None)

    reactions = post.reactions
    for name in REACTION_FEATURES[platform]:
        value = {"likes": reactions.likes, "comments": reactions.comments, "shares": reactions.shares}[name]
        _put(features, name, value)

    if platform == "twitter":
        features["has_media"] = float(post.has_media)
        features["has_url"] = float(bool(post.urls) or "http" in text)
        _put(features, "tweets_count", account.statuses_count if account else None)
        _put(
            features,
            "profile_description_length",
            len(account.profile_description) if account else None,
        )
        ref = reference_time if reference_time is not None else post.created_at
        _put(features, "account_age_years", account.account_age_years(ref) if account else None)
        _put(features, "listed_count", account.listed_count if account else None)
        _put(features, "has_profile_image", float(account.has_profile_image) if account else None)

    return features
