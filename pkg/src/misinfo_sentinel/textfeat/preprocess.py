"""Text preprocessing: URL/hashtag/mention/emoji stripping and tokenization."""

from __future__ import annotations

import re
import unicodedata
from functools import lru_cache
from importlib import resources

_URL_RE = re.compile(r"(?i)\b(?:https?://\S+|www\.\S+|t\.co/\S+)")
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_RE = re.compile(r"#\w+")
# Pictographs, emoticons, dingbats, flags, modifiers, keycaps, ZWJ sequences.
_EMOJI_RE = re.compile(
    "["
    "\U0001f000-\U0001fbff"
    "☀-➿"
    "⬀-⯿"
    "︀-️"
    "‍"
    "⃣"
    "]+"
)
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def _load_wordfile(name: str) -> frozenset[str]:
    raw = resources.files("misinfo_sentinel.textfeat").joinpath(f"data/{name}")
    words = set()
    for line in raw.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.casefold())
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    return _load_wordfile("stopwords.txt")


@lru_cache(maxsize=1)
def pronoun_list() -> frozenset[str]:
    return _load_wordfile("pronouns.txt")


@lru_cache(maxsize=1)
def noun_lexicon() -> frozenset[str]:
    return _load_wordfile("nouns.txt")


@lru_cache(maxsize=1)
def spelling_dictionary() -> frozenset[str]:
    """Union of the shipped word lists; lookups are casefolded."""
    return (
        _load_wordfile("words.txt")
        | _load_wordfile("nouns.txt")
        | _load_wordfile("pronouns.txt")
        | _load_wordfile("stopwords.txt")
    )


def strip_markup(text: str) -> str:
    """Remove URLs, #hashtags, @mentions, and emoji from ``text``."""
    text = unicodedata.normalize("NFC", text)
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = _HASHTAG_RE.sub(" ", text)
    text = _EMOJI_RE.sub(" ", text)
    return text


def preprocess(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercased alphanumeric tokens of length >= 2, stopwords removed."""
    if stopwords is None:
        stopwords = default_stopwords()
    tokens = []
    for token in _TOKEN_RE.findall(strip_markup(text).casefold()):
        if len(token) >= 2 and token.isalnum() and token not in stopwords:
            tokens.append(token)
    return tokens
