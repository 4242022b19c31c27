"""Refanging of obfuscated (defanged) URLs.

The rule table lives in ``data/refang_rules.json`` so new defang styles
are data edits, not code changes.  Rules are literal patterns applied
case-insensitively, longest first, and the whole pass repeats until a
fixpoint: replacements such as ``[/]`` -> ``/`` can themselves assemble a
longer pattern (``[[/]/]`` -> ``[//]``), and the fixpoint is what makes
refanging idempotent.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from urllib.parse import urlsplit, urlunsplit

from ..errors import ValidationError

_MAX_PASSES = 20
_DEFAULT_PORTS = {"http": 80, "https": 443}
_TRAILING_PUNCT = ".,;:!?'"


@dataclass(frozen=True)
class RefangRule:
    id: str
    pattern: str
    replacement: str

    @property
    def regex(self) -> re.Pattern:
        return _compile_pattern(self.pattern)


@lru_cache(maxsize=None)
def _compile_pattern(pattern: str) -> re.Pattern:
    return re.compile(re.escape(pattern), re.IGNORECASE)


@lru_cache(maxsize=1)
def load_rules() -> tuple[RefangRule, ...]:
    """Rules from the shipped table, ordered longest pattern first."""
    raw = resources.files("misinfo_sentinel.claims").joinpath("data/refang_rules.json")
    table = json.loads(raw.read_text(encoding="utf-8"))
    rules = [RefangRule(r["id"], r["pattern"], r["replacement"]) for r in table["rules"]]
    rules.sort(key=lambda r: -len(r.pattern))
    return tuple(rules)


@dataclass
class RefangResult:
    text: str
    applied: list[str]


def refang(text: str, rules: tuple[RefangRule, ...] | None = None) -> RefangResult:
    """Apply the refang rule table to ``text`` until nothing changes."""
    if rules is None:
        rules = load_rules()
    applied: list[str] = []
    for _ in range(_MAX_PASSES):
        changed = False
        for rule in rules:
            new_text, n = rule.regex.subn(rule.replacement, text)
            if n:
                text = new_text
                changed = True
                if rule.id not in applied:
                    applied.append(rule.id)
        if not changed:
            break
    return RefangResult(text=text, applied=applied)


def strip_trailing_punctuation(text: str) -> str:
    """Drop sentence punctuation from the end of a refanged URL span."""
    while text:
        last = text[-1]
        if last in _TRAILING_PUNCT:
            text = text[:-1]
        elif last == ")" and text.count(")") > text.count("("):
            text = text[:-1]
        else:
            break
    return text


def canonicalize_url(url: str) -> str:
    """Normalize a refanged URL: strip trailing punctuation, lowercase the
    scheme and host, drop default ports, keep path/query/fragment verbatim.

    Raises :class:`ValidationError` when the string is not a valid absolute
    http/https URL.
    """
    url = strip_trailing_punctuation(url.strip())
    try:
        parts = urlsplit(url)
    except ValueError as exc:
        raise ValidationError(f"unparseable URL {url!r}: {exc}") from None
    scheme = parts.scheme.lower()
    if scheme not in _DEFAULT_PORTS:
        raise ValidationError(f"not an http/https URL: {url!r}")
    host = parts.hostname
    if not host or "." not in host.strip("."):
        raise ValidationError(f"no usable host in {url!r}")
    try:
        port = parts.port
    except ValueError as exc:
        raise ValidationError(f"bad port in {url!r}: {exc}") from None

    netloc = host
    if port is not None and port != _DEFAULT_PORTS[scheme]:
        netloc = f"{host}:{port}"
    if parts.username:
        userinfo = parts.username
        if parts.password is not None:
            userinfo += f":{parts.password}"
        netloc = f"{userinfo}@{netloc}"
    return urlunsplit((scheme, netloc, parts.path, parts.query, parts.fragment))
