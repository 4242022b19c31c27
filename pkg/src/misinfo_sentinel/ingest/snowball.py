"""Snowball expansion of a topic keyword list.

Starting from seed keywords, each round proposes corpus tokens that
co-occur with an already-accepted keyword in at least ``min_cooccurrence``
of that keyword's posts.  Every proposal goes through an approval callback
(an interactive prompt or a scripted allowlist); the loop stops after a
full round with no new acceptances.  The result pairs the topic seed with
each accepted term to form composite keywords.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from typing import Callable, Iterable, Sequence

from ..errors import ArgumentError
from .filtering import KeywordMatcher, KeywordSet, normalize_keyword
from .records import Post

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


def _tokens(text: str) -> list[str]:
    return _WORD_RE.findall(unicodedata.normalize("NFC", text).casefold())


def snowball_expand(
    corpus: Sequence[Post],
    seeds: Iterable[str],
    min_cooccurrence: float = 0.05,
    approve: Callable[[str], bool] | None = None,
    stopwords: frozenset[str] | None = None,
    max_rounds: int = 50,
) -> KeywordSet:
    """Grow a keyword set from seeds by co-occurrence plus manual approval.

    ``approve`` is called once per candidate token and must return True to
    accept it; None approves everything (useful only in tests).  Composites
    are formed by prefixing the first seed to each accepted term, except
    for terms that already contain the seed (e.g. single-word blends).
    """
    seeds = [normalize_keyword(s) for s in seeds]
    if not seeds:
        raise ArgumentError("seeds must be non-empty")
    corpus = list(corpus)
    if not corpus:
        raise ArgumentError("corpus must be non-empty")
    if approve is None:
        approve = lambda token: True
    if stopwords is None:
        from ..textfeat.preprocess import default_stopwords

        stopwords = default_stopwords()

    token_lists = [_tokens(p.text) for p in corpus]
    accepted: list[str] = list(seeds)
    rejected: list[str] = []
    known = set(accepted)
    rounds = 0

    while rounds < max_rounds:
        rounds += 1
        new_this_round = 0
        # Candidate rates are computed against the current accepted set as
        # of the start of the round, so acceptances take effect next round.
        snapshot = list(accepted)
        proposals: dict[str, float] = {}
        for keyword in snapshot:
            matcher = KeywordMatcher([keyword])
            matching = [toks for p, toks in zip(corpus, token_lists) if matcher.matches(p.text)]
            if not matching:
                continue
            df = Counter()
            for toks in matching:
                df.update(set(toks))
            for token, count in df.items():
                if token in known or token in stopwords or len(token) < 2:
                    continue
                rate = count / len(matching)
                if rate >= min_cooccurrence:
                    proposals[token] = max(proposals.get(token, 0.0), rate)
        for token in sorted(proposals, key=lambda t: (-proposals[t], t)):
            known.add(token)
            if approve(token):
                accepted.append(token)
                new_this_round += 1
            else:
                rejected.append(token)
        if new_this_round == 0:
            break

    result = KeywordSet(seeds=seeds, accepted=accepted, rejected=rejected, rounds=rounds)
    return result


def composite_keywords(keywords: KeywordSet) -> list[str]:
    """Pair the topic seed with each accepted term into composite keywords."""
    topic = keywords.seeds[0]
    composites = []
    for term in keywords.accepted:
        if term == topic:
            continue
        composite = term if topic in term else f"{topic} {term}"
        if composite not in composites:
            composites.append(composite)
    return composites
