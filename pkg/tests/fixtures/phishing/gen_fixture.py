"""One-off generator for the bundled phishing pipeline fixture.

Run from this directory to regenerate posts.jsonl and the mock scanner
fixture tree.  The URL verdict design (and therefore truth.json) is fixed
by hand, see URLS below; everything else is deterministic dressing.
"""

import json
from datetime import datetime, timezone
from pathlib import Path

HERE = Path(__file__).parent

SCAN_DATE = 1_620_000_000  # fixed analysis date for reproducible checkpoints

# (key, canonical url, defang template, malicious engines, benign engines,
#  blocklisted, claim posts as (user, day-offset, retweets))
URLS = [
    ("alpha", "http://alpha-login.example/login", "hxxp://alpha-login[.]example/login",
     5, 60, False, [("uA", 2, 1), ("uB", 3, 0), ("uA", 5, 2)]),
    ("beta", "https://beta-verify.example/verify", "hxxps[:]//beta-verify[.]example/verify",
     1, 70, False, [("uC", 4, 0), ("uD", 8, 1)]),
    ("gamma", "http://gamma-update.example/update", "hXXp:[//]gamma-update[dot]example/update",
     12, 55, False, [("uE", 6, 3), ("uF", 7, 0), ("uE", 9, 1), ("uF", 12, 0), ("uE", 15, 2)]),
    ("delta", "https://delta-account.example/account", "hxxps://delta-account(.)example[/]account",
     3, 68, False, [("uG", 10, 0), ("uH", 11, 4)]),
    ("epsilon", "http://epsilon-files.example/download", "hxxp://epsilon-files[.]example[/]download",
     0, 65, True, [("uI", 13, 1), ("uJ", 14, 0), ("uI", 16, 0)]),
    ("zeta", "https://zeta-shop.example/", "hxxps[:]//zeta-shop[.]example/",
     0, 72, False, [("uK", 17, 2), ("uL", 18, 0), ("uK", 20, 1), ("uL", 22, 0)]),
    ("eta", "http://eta-promo.example/promo", "hxxp://eta-promo[dot]example/promo",
     0, 61, False, [("uM", 19, 0), ("uN", 21, 0), ("uM", 23, 0), ("uN", 25, 0)]),
    # theta is unknown to the scanner (404) and unlisted -> benign
    ("theta", "https://theta-new.example/signup", "hxxps://theta-new[.]example/signup",
     None, None, False, [("uA", 24, 5)]),
]

WINDOW_START = 1_610_322_000  # 2021-01-11
DAY = 86_400


def sha(url):
    import hashlib

    return hashlib.sha256(url.encode()).hexdigest()


def vt_body(n_mal, n_ben):
    results = {}
    for i in range(n_mal):
        results[f"engine{i:02d}"] = {"category": "malicious", "engine_name": f"engine{i:02d}"}
    for i in range(n_ben):
        results[f"vendor{i:02d}"] = {"category": "harmless", "engine_name": f"vendor{i:02d}"}
    return {
        "data": {
            "id": "fixture",
            "type": "url",
            "attributes": {
                "last_analysis_date": SCAN_DATE,
                "last_analysis_results": results,
            },
        }
    }


def main():
    reports = HERE / "vt" / "reports"
    reports.mkdir(parents=True, exist_ok=True)
    truth = {}
    blocklist = []
    posts = []
    post_no = 0

    def tweet(user, text, day, retweets=0, lang="en"):
        nonlocal post_no
        post_no += 1
        return {
            "id": f"t{post_no:04d}",
            "author": user,
            "created_at": datetime.fromtimestamp(
                WINDOW_START + day * DAY + (post_no % 7) * 3600, tz=timezone.utc
            ).strftime("%Y-%m-%dT%H:%M:%SZ"),
            "text": text,
            "lang": lang,
            "retweet_count": retweets,
            "like_count": (post_no * 3) % 11,
        }

    for key, canonical, defanged, n_mal, n_ben, listed, claims in URLS:
        if n_mal is None:
            truth[canonical] = "benign"
        else:
            (reports / f"{sha(canonical)}.json").write_text(json.dumps(vt_body(n_mal, n_ben), indent=1))
            is_mal = n_mal >= 1 or listed
            truth[canonical] = "malicious" if is_mal else "benign"
        if listed:
            truth[canonical] = "malicious"
            blocklist.append({"url": canonical, "verified": "yes"})
        for user, day, retweets in claims:
            posts.append(
                tweet(user, f"Phishing alert: {defanged} is stealing credentials, report it", day, retweets)
            )

    # educational phishing chatter: keyword present, no obfuscated url (60)
    educational = [
        "Phishing attacks keep rising, train your team",
        "How phishing kits work, a thread",
        "Report phishing to your provider at https://safety.example/report",
        "Phishing awareness month starts today",
        "That phishing talk yesterday was excellent",
    ]
    for i in range(60):
        posts.append(tweet(f"edu{i % 23}", f"{educational[i % len(educational)]} ({i})", 1 + i % 80))

    # off-topic chatter: no keyword, filtered out (80)
    for i in range(80):
        posts.append(tweet(f"chat{i % 31}", f"lovely weather and coffee today, day {i}", 2 + i % 80))

    # keyword posts outside the window (20)
    for i in range(20):
        posts.append(tweet(f"late{i % 7}", f"old phishing warning {i}", 120 + i))

    # non-english keyword posts (16)
    for i in range(16):
        posts.append(tweet(f"intl{i % 5}", f"alerta de phishing numero {i}", 3 + i % 60, lang="es"))

    assert len(posts) == 200, len(posts)
    with open(HERE / "posts.jsonl", "w") as fh:
        for rec in posts:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")

    (HERE / "vt" / "blocklist.json").write_text(json.dumps(blocklist, indent=1))
    (HERE / "truth.json").write_text(json.dumps(truth, indent=1, sort_keys=True))
    (HERE / "keywords.txt").write_text("phishing\n")
    with open(HERE / "followers.csv", "w") as fh:
        fh.write("src,dst\n")
        for edge in [
            ("uK", "uL"), ("uL", "uK"), ("uA", "uK"),
            ("uM", "uN"), ("uN", "uM"), ("uA", "uM"),
        ]:
            fh.write(f"{edge[0]},{edge[1]}\n")
    print(f"wrote {len(posts)} posts, {len(truth)} urls, {len(blocklist)} blocklist entries")


if __name__ == "__main__":
    main()
