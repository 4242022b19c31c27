"""Loaders, filtering, and snowball expansion."""

import json

import pytest

from misinfo_sentinel.errors import ArgumentError
from misinfo_sentinel.ingest import (
    Account,
    KeywordSet,
    Post,
    ReactionCounts,
    filter_language,
    filter_posts,
    load_posts,
    parse_window,
    read_posts,
    snowball_expand,
    write_posts,
)
from misinfo_sentinel.ingest.loaders import Diagnostic
from misinfo_sentinel.ingest.snowball import composite_keywords

TS = 1_583_020_800  # 2020-03-01T00:00:00Z


def make_post(text, post_id="p1", created_at=TS, lang=None, **kw):
    return Post(
        id=post_id,
        platform="twitter",
        author_id="u1",
        created_at=created_at,
        text=text,
        language=lang,
        **kw,
    )


# --- loading -----------------------------------------------------------------


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    diags: list[Diagnostic] = []
    assert list(load_posts(path, "twitter", diags)) == []
    assert diags == []


def test_load_valid_and_malformed(tmp_path):
    path = tmp_path / "posts.jsonl"
    rows = [
        {"id": "1", "author": "a", "created_at": "2021-01-11T10:00:00Z", "text": "one"},
        {"id": "2", "author": "a", "created_at": "2021-01-11T11:00:00Z", "text": "two"},
        "{broken json",
        {"id": "3", "author": "b", "created_at": "2021-01-11T12:00:00Z", "text": "three"},
    ]
    path.write_text("\n".join(r if isinstance(r, str) else json.dumps(r) for r in rows))
    diags: list[Diagnostic] = []
    posts = list(load_posts(path, "twitter", diags))
    assert [p.id for p in posts] == ["1", "2", "3"]
    assert len(diags) == 1 and diags[0].line_no == 3


def test_load_reddit_table2_row_count(tmp_path):
    """A file the size of the smallest 2019 platform slice loads in full."""
    path = tmp_path / "reddit.jsonl"
    with open(path, "w") as fh:
        for i in range(21_250):
            fh.write(
                json.dumps(
                    {
                        "id": f"r{i}",
                        "author": f"u{i % 997}",
                        "created_at": "2019-07-01T00:00:00Z",
                        "title": f"post {i}",
                        "score": i % 11,
                        "comment_count": i % 3,
                    }
                )
                + "\n"
            )
    posts = list(load_posts(path, "reddit"))
    assert len(posts) == 21_250
    assert posts[0].reactions.likes == 0 and posts[0].reactions.shares is None


def test_unknown_reactions_stay_unknown():
    post = make_post("x")
    assert post.reactions.likes is None  # explicit unknown, not a silent zero


def test_roundtrip_field_for_field(tmp_path):
    posts = [
        make_post("exact bytes: café — \U0001F600", post_id="a", lang="en"),
        make_post("plain", post_id="b", has_media=True, urls=["https://x.example"]),
        Post(
            id="c",
            platform="reddit",
            author_id="u9",
            created_at=TS + 5,
            text="title\n\nbody",
            reactions=ReactionCounts(likes=3, comments=1),
            retweet_of=None,
        ),
    ]
    path = tmp_path / "norm.jsonl"
    write_posts(path, posts)
    loaded = list(read_posts(path))
    assert loaded == posts


# --- filtering ----------------------------------------------------------------


def test_filter_direct_match():
    kept = filter_posts([make_post("Beware of phishing")], ["phishing"])
    assert len(kept) == 1


def test_filter_composite_sequence_absent():
    kept = filter_posts([make_post("Zoom update is out")], ["Zoom Security"])
    assert kept == []


def test_filter_composite_adjacency_and_normalization():
    posts = [
        make_post("ZOOM   security bug found", post_id="hit"),
        make_post("zoom has a security bug", post_id="miss"),  # not adjacent
    ]
    kept = filter_posts(posts, ["zoom security"])
    assert [p.id for p in kept] == ["hit"]


def test_filter_window_and_inverted_window():
    window = parse_window("2020-03-01..2020-03-31")
    inside = make_post("phishing now", created_at=TS + 3600, post_id="in")
    outside = make_post("phishing later", created_at=TS + 45 * 86400, post_id="out")
    assert [p.id for p in filter_posts([inside, outside], ["phishing"], window)] == ["in"]
    with pytest.raises(ArgumentError):
        parse_window("2020-03-31..2020-03-01")


def test_filter_same_day():
    from datetime import date

    posts = [
        make_post("phishing today", created_at=TS + 100, post_id="today"),
        make_post("phishing yesterday", created_at=TS - 100, post_id="yesterday"),
    ]
    kept = filter_posts(posts, ["phishing"], same_day=True, ingestion_date=date(2020, 3, 1))
    assert [p.id for p in kept] == ["today"]


def test_filter_idempotent_and_subset():
    posts = [make_post(f"phishing alert {i}", post_id=str(i)) for i in range(5)]
    posts += [make_post(f"weather {i}", post_id=f"w{i}") for i in range(5)]
    once = filter_posts(posts, ["phishing"])
    twice = filter_posts(once, ["phishing"])
    assert once == twice
    assert set(p.id for p in once) <= set(p.id for p in posts)


def test_filter_instagram_table2_scale():
    """6,885 of 465,513 posts survive an 18-composite filter (streamed)."""
    composites = [
        "zoom malware", "zoom phishing", "zoom virus", "zoom security",
        "zoom exploit", "zoom hijacking", "zoom bug", "zoom hackers",
        "zoom privacy", "zoom backdoor", "zoom hacked", "zoom security bug",
        "zoom windows", "zoom passwords", "zoom windows steal", "zoombombing",
        "zoom data", "zoom scam",
    ]
    assert len(composites) == 18

    def stream():
        for i in range(465_513):
            if i < 6_885:
                text = f"Worried about {composites[i % 18]} reports {i}"
            else:
                text = f"lovely zoom call with family {i}"
            yield Post(
                id=f"i{i}",
                platform="instagram",
                author_id=f"u{i % 5000}",
                created_at=TS + (i % 100000),
                text=text,
            )

    kept = filter_posts(stream(), composites)
    assert len(kept) == 6_885


def test_language_filter_keeps_english_and_untagged():
    posts = [
        make_post("phishing", post_id="en", lang="en"),
        make_post("phishing", post_id="none", lang=None),
        make_post("phishing", post_id="de", lang="de"),
    ]
    assert [p.id for p in filter_language(posts)] == ["en", "none"]


# --- keyword sets ---------------------------------------------------------------


def test_keywordset_invariants():
    ks = KeywordSet(seeds=["Zoom"], accepted=["zoom", "zoom security"])
    assert ks.seeds[0] in ks.accepted
    with pytest.raises(ArgumentError):
        KeywordSet(seeds=["zoom"], accepted=["zoom", "Zoom"])  # case-insensitive dupe


# --- snowball -------------------------------------------------------------------


def corpus_with_cooccurrence():
    posts = []
    for i in range(10):
        posts.append(make_post(f"zoom security matters {i}", post_id=f"s{i}"))
    for i in range(10):
        posts.append(make_post(f"zoom privacy worries {i}", post_id=f"p{i}"))
    return posts


def test_snowball_accepts_full_cooccurrence():
    posts = [make_post(f"zoom security {i}", post_id=str(i)) for i in range(4)]
    ks = snowball_expand(posts, ["zoom"], min_cooccurrence=0.5, approve=lambda t: True)
    assert "security" in ks.accepted


def test_snowball_approve_none():
    ks = snowball_expand(corpus_with_cooccurrence(), ["zoom"], approve=lambda t: False)
    assert ks.accepted == ["zoom"]
    assert ks.rounds == 1


def test_snowball_terminates_and_is_bounded():
    posts = corpus_with_cooccurrence()
    ks = snowball_expand(posts, ["zoom"], min_cooccurrence=0.01, approve=lambda t: True)
    vocab = {t for p in posts for t in p.text.lower().split()}
    assert set(ks.accepted) <= vocab
    assert ks.rounds >= 2  # grew, then saturated


def test_snowball_scripted_replay_yields_18_composites():
    """Scripted approvals rebuild the 18-composite topic list."""
    terms = [
        "malware", "phishing", "virus", "exploit", "hijacking", "bug",
        "hackers", "backdoor", "hacked", "windows", "passwords",
        "zoombombing", "data", "steal", "scam", "spying",
    ]
    posts = []
    for i, term in enumerate(terms):
        for j in range(3):
            posts.append(make_post(f"zoom {term} report", post_id=f"{i}-{j}"))
    posts.append(make_post("zoom security focus", post_id="seed-s"))
    posts.append(make_post("zoom privacy focus", post_id="seed-p"))
    allow = set(terms)
    ks = snowball_expand(
        posts,
        ["zoom", "security", "privacy"],
        min_cooccurrence=0.02,
        approve=lambda t: t in allow,
    )
    composites = composite_keywords(ks)
    assert len(composites) == 18
    assert "zoom malware" in composites
    assert "zoombombing" in composites  # seed-containing term stays unpaired
    assert "zoom security" in composites and "zoom privacy" in composites


# --- accounts --------------------------------------------------------------------


def test_account_age_is_whole_years_nonnegative():
    acct = Account(id="a", platform="twitter", created_at=1_262_304_000)  # 2010-01-01
    assert acct.account_age_years(1_583_020_800) == 10  # 2020-03-01
    assert acct.account_age_years(1_262_304_000) == 0
    assert acct.account_age_years(0) == 0  # clamped


def test_duplicate_post_ids_reported(tmp_path):
    path = tmp_path / "dupes.jsonl"
    rec = {"id": "same", "author": "a", "created_at": "2021-01-11T10:00:00Z", "text": "x"}
    path.write_text(json.dumps(rec) + "\n" + json.dumps(rec) + "\n")
    diags: list[Diagnostic] = []
    posts = list(load_posts(path, "twitter", diags))
    assert len(posts) == 1
    assert len(diags) == 1 and "duplicate" in diags[0].message
