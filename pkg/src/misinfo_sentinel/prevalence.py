"""Prevalence arithmetic: join claim labels to posts/users and summarize.

A claim is *true* when its URL verified as malicious and *false* when the
URL is benign: a false claim is misinformation.  Posts claiming several
URLs count as malicious when any of their URLs is malicious, which keeps
the tweet columns a partition of the total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .claims.extract import UrlClaim
from .errors import ArgumentError

TRUE_CLAIM = "true_claim"
FALSE_CLAIM = "false_claim"
MALICIOUS = "malicious"
BENIGN = "benign"


@dataclass(slots=True)
class ClaimLabel:
    post_id: str
    canonical_url: str
    verdict: str  # true_claim <=> url malicious

    def __post_init__(self):
        if self.verdict not in (TRUE_CLAIM, FALSE_CLAIM):
            raise ArgumentError(f"bad claim verdict {self.verdict!r}")

    def to_record(self) -> dict:
        return {
            "post_id": self.post_id,
            "canonical_url": self.canonical_url,
            "verdict": self.verdict,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ClaimLabel":
        return cls(rec["post_id"], rec["canonical_url"], rec["verdict"])


def label_claims(claims: Sequence[UrlClaim], url_labels: Mapping[str, str]) -> list[ClaimLabel]:
    """Label every claim from its URL's final malicious/benign label."""
    labeled = []
    for claim in claims:
        url_label = url_labels.get(claim.canonical_url)
        if url_label is None:
            raise ArgumentError(f"no label for url {claim.canonical_url}")
        verdict = TRUE_CLAIM if url_label == MALICIOUS else FALSE_CLAIM
        labeled.append(ClaimLabel(claim.post_id, claim.canonical_url, verdict))
    return labeled


def _pct(part: int, whole: int) -> float:
    """One-decimal percentage; the human table rounds this to an integer."""
    return round(100.0 * part / whole, 1) if whole else 0.0


@dataclass
class PrevalenceTable:
    tweet_count: int
    unique_users: int
    unique_urls: int
    malicious_urls: int
    benign_urls: int
    benign_url_pct: float
    malicious_tweets: int
    benign_tweets: int
    benign_tweet_pct: float
    users_with_true_claims: int
    users_with_false_claims: int
    users_with_both: int
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def human_rows(self) -> list[tuple[str, str]]:
        return [
            ("tweets", f"{self.tweet_count:,}"),
            ("unique users", f"{self.unique_users:,}"),
            ("unique urls", f"{self.unique_urls:,}"),
            ("malicious urls", f"{self.malicious_urls:,}"),
            ("benign urls", f"{self.benign_urls:,} ({round(self.benign_url_pct)}%)"),
            ("malicious tweets", f"{self.malicious_tweets:,}"),
            ("benign tweets (misinformation)", f"{self.benign_tweets:,} ({round(self.benign_tweet_pct)}%)"),
            ("accounts with true claims", f"{self.users_with_true_claims:,}"),
            ("accounts with false claims", f"{self.users_with_false_claims:,}"),
        ]


def prevalence_report(
    claim_labels: Sequence[ClaimLabel],
    authors: Mapping[str, str],
) -> PrevalenceTable:
    """Summary table over labeled claims; ``authors`` maps post id -> user.

    Users appearing on both sides are counted in both user columns, so the
    two columns may sum past the union; the table reports the raw sets and
    the overlap instead of reconciling them.
    """
    post_urls: dict[str, list[ClaimLabel]] = {}
    url_verdict: dict[str, str] = {}
    for cl in claim_labels:
        post_urls.setdefault(cl.post_id, []).append(cl)
        url_verdict[cl.canonical_url] = cl.verdict

    tweet_count = len(post_urls)
    malicious_tweets = 0
    users: set[str] = set()
    users_true: set[str] = set()
    users_false: set[str] = set()
    for post_id, cls_ in post_urls.items():
        user = authors.get(post_id)
        if user is None:
            raise ArgumentError(f"no author for post {post_id}")
        users.add(user)
        if any(c.verdict == TRUE_CLAIM for c in cls_):
            malicious_tweets += 1
            users_true.add(user)
        if any(c.verdict == FALSE_CLAIM for c in cls_):
            users_false.add(user)

    benign_tweets = tweet_count - malicious_tweets
    unique_urls = len(url_verdict)
    malicious_urls = sum(1 for v in url_verdict.values() if v == TRUE_CLAIM)
    benign_urls = unique_urls - malicious_urls
    both = users_true & users_false

    table = PrevalenceTable(
        tweet_count=tweet_count,
        unique_users=len(users),
        unique_urls=unique_urls,
        malicious_urls=malicious_urls,
        benign_urls=benign_urls,
        benign_url_pct=_pct(benign_urls, unique_urls),
        malicious_tweets=malicious_tweets,
        benign_tweets=benign_tweets,
        benign_tweet_pct=_pct(benign_tweets, tweet_count),
        users_with_true_claims=len(users_true),
        users_with_false_claims=len(users_false),
        users_with_both=len(both),
        notes=[
            "user columns count mixed-claim users on both sides; "
            "true + false >= union, equality iff no overlap"
        ],
    )
    assert table.malicious_tweets + table.benign_tweets == table.tweet_count
    assert table.malicious_urls + table.benign_urls == table.unique_urls
    return table


@dataclass(slots=True)
class UserClaimSummary:
    user_id: str
    true_count: int
    false_count: int

    @property
    def false_claim_rate(self) -> float:
        return self.false_count / (self.true_count + self.false_count)


@dataclass
class Histogram:
    """Binned counts; edges are [lo, hi) except the last bin, which is closed."""

    edges: list[float]
    counts: list[int]

    def __post_init__(self):
        if len(self.counts) != len(self.edges) - 1:
            raise ArgumentError("histogram counts must match bin count")

    @property
    def total(self) -> int:
        return sum(self.counts)


def make_histogram(values: Sequence[float], edges: Sequence[float]) -> Histogram:
    edges = list(edges)
    if sorted(edges) != edges or len(edges) < 2:
        raise ArgumentError("histogram edges must be ascending")
    counts = [0] * (len(edges) - 1)
    for v in values:
        if v < edges[0] or v > edges[-1]:
            raise ArgumentError(f"value {v} outside histogram range")
        for b in range(len(counts)):
            if v < edges[b + 1] or (b == len(counts) - 1 and v <= edges[-1]):
                counts[b] += 1
                break
    return Histogram(edges=edges, counts=counts)


def count_histogram_edges(max_value: int, exact_limit: int = 100) -> list[float]:
    """Unit bins up to ``exact_limit``, then doubling (log-spaced) bins."""
    top = max(int(max_value), 0)
    edges = [float(e) for e in range(0, min(top, exact_limit) + 2)]
    if top > exact_limit:
        hi = edges[-1]
        while hi <= top:
            hi = hi * 2
            edges.append(hi)
    return edges


def false_claim_rates(
    claim_labels: Sequence[ClaimLabel],
    authors: Mapping[str, str],
) -> tuple[list[UserClaimSummary], Histogram]:
    """Per-user true/false counts plus a 10-bin histogram of the rates."""
    per_user: dict[str, list[int]] = {}
    for cl in claim_labels:
        user = authors.get(cl.post_id)
        if user is None:
            raise ArgumentError(f"no author for post {cl.post_id}")
        counts = per_user.setdefault(user, [0, 0])
        counts[0 if cl.verdict == TRUE_CLAIM else 1] += 1
    summaries = [
        UserClaimSummary(user_id=u, true_count=c[0], false_count=c[1])
        for u, c in sorted(per_user.items())
    ]
    edges = [i / 10 for i in range(11)]
    hist = make_histogram([s.false_claim_rate for s in summaries], edges)
    return summaries, hist


@dataclass
class RetweetSpread:
    histogram: Histogram
    urls_total: int
    urls_retweeted_more_than_once: int

    @property
    def share_retweeted_more_than_once(self) -> float:
        return self.urls_retweeted_more_than_once / self.urls_total if self.urls_total else 0.0


def retweet_spread(
    false_claim_labels: Sequence[ClaimLabel],
    retweets: Mapping[str, int],
) -> RetweetSpread:
    """Histogram of total retweets per false-claimed URL."""
    per_url: dict[str, int] = {}
    for cl in false_claim_labels:
        if cl.verdict != FALSE_CLAIM:
            raise ArgumentError("retweet_spread expects only false claims")
        per_url[cl.canonical_url] = per_url.get(cl.canonical_url, 0) + int(
            retweets.get(cl.post_id, 0)
        )
    values = list(per_url.values())
    max_v = max(values, default=0)
    hist = make_histogram(values, count_histogram_edges(max_v))
    more_than_once = sum(1 for v in values if v > 1)
    return RetweetSpread(
        histogram=hist,
        urls_total=len(per_url),
        urls_retweeted_more_than_once=more_than_once,
    )


@dataclass
class CampaignReport:
    rows: list[tuple[str, int, int]]  # (url, tweet_count, distinct_users)
    distinct_users_total: int


def campaign_urls(
    false_claim_labels: Sequence[ClaimLabel],
    authors: Mapping[str, str],
    min_tweets: int = 4,
) -> CampaignReport:
    """False-claimed URLs pushed at least ``min_tweets`` times (campaigns)."""
    per_url_posts: dict[str, list[str]] = {}
    for cl in false_claim_labels:
        if cl.verdict != FALSE_CLAIM:
            raise ArgumentError("campaign_urls expects only false claims")
        per_url_posts.setdefault(cl.canonical_url, []).append(cl.post_id)
    rows = []
    all_users: set[str] = set()
    for url, posts in sorted(per_url_posts.items(), key=lambda kv: (-len(kv[1]), kv[0])):
        if len(posts) < min_tweets:
            continue
        users = {authors[p] for p in posts}
        all_users |= users
        rows.append((url, len(posts), len(users)))
    return CampaignReport(rows=rows, distinct_users_total=len(all_users))


def write_report_json(table: PrevalenceTable, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(table.to_dict(), fh, ensure_ascii=False, indent=1, sort_keys=True)
        fh.write("\n")


def write_report_csv(table: PrevalenceTable, path):
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        for key, value in sorted(table.to_dict().items()):
            if key != "notes":
                writer.writerow([key, value])
