"""Defanged-URL claim extraction and canonicalization."""

from .extract import UrlClaim, extract_claims, find_defanged_spans, unique_urls
from .refang import (
    RefangResult,
    RefangRule,
    canonicalize_url,
    load_rules,
    refang,
    strip_trailing_punctuation,
)

__all__ = [
    "RefangResult",
    "RefangRule",
    "UrlClaim",
    "canonicalize_url",
    "extract_claims",
    "find_defanged_spans",
    "load_rules",
    "refang",
    "strip_trailing_punctuation",
    "unique_urls",
]
