"""Loading, normalizing, and filtering posts and accounts."""

from .filtering import (
    KeywordMatcher,
    KeywordSet,
    drop_retweets,
    filter_language,
    filter_posts,
    normalize_keyword,
    normalize_text,
    parse_window,
)
from .loaders import Diagnostic, load_accounts, load_posts
from .records import (
    PLATFORMS,
    Account,
    Post,
    ReactionCounts,
    format_timestamp,
    parse_timestamp,
    read_posts,
    write_posts,
)
from .snowball import composite_keywords, snowball_expand

__all__ = [
    "PLATFORMS",
    "Account",
    "Diagnostic",
    "KeywordMatcher",
    "KeywordSet",
    "Post",
    "ReactionCounts",
    "composite_keywords",
    "drop_retweets",
    "filter_language",
    "filter_posts",
    "format_timestamp",
    "load_accounts",
    "load_posts",
    "normalize_keyword",
    "normalize_text",
    "parse_timestamp",
    "parse_window",
    "read_posts",
    "snowball_expand",
    "write_posts",
]
