"""CLI verbs, exit codes, and file surfaces."""

import csv
import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))
import synthcorpus

from misinfo_sentinel.cli import main
from misinfo_sentinel.mocknet import MockReputationServer

PHISH_FIX = Path(__file__).parent / "fixtures" / "phishing"


def test_ingest_and_claims_extract(tmp_path, capsys):
    normalized = tmp_path / "norm.jsonl"
    rc = main(
        [
            "ingest",
            "--platform", "twitter",
            "--input", str(PHISH_FIX / "posts.jsonl"),
            "--output", str(normalized),
            "--keywords", str(PHISH_FIX / "keywords.txt"),
            "--window", "2021-01-11..2021-04-11",
        ]
    )
    assert rc == 0
    lines = normalized.read_text().splitlines()
    assert len(lines) == 84  # 24 claims + 60 educational keyword posts

    claims_out = tmp_path / "claims.jsonl"
    rc = main(["claims", "extract", "--input", str(normalized), "--output", str(claims_out)])
    assert rc == 0
    claims = [json.loads(l) for l in claims_out.read_text().splitlines()]
    assert len(claims) == 24
    assert {c["canonical_url"] for c in claims} == set(
        json.loads((PHISH_FIX / "truth.json").read_text())
    )


def test_ingest_bad_window_exit_2(tmp_path):
    rc = main(
        [
            "ingest",
            "--platform", "twitter",
            "--input", str(PHISH_FIX / "posts.jsonl"),
            "--output", str(tmp_path / "x.jsonl"),
            "--keywords", str(PHISH_FIX / "keywords.txt"),
            "--window", "2021-04-11..2021-01-11",
        ]
    )
    assert rc == 2


def test_reputation_scan_cli_and_live_credentials(tmp_path, monkeypatch):
    normalized = tmp_path / "norm.jsonl"
    main(
        [
            "ingest",
            "--platform", "twitter",
            "--input", str(PHISH_FIX / "posts.jsonl"),
            "--output", str(normalized),
            "--keywords", str(PHISH_FIX / "keywords.txt"),
        ]
    )
    claims_out = tmp_path / "claims.jsonl"
    main(["claims", "extract", "--input", str(normalized), "--output", str(claims_out)])

    policy = tmp_path / "policy.toml"
    policy.write_text("[policy]\nrate_limit_per_minute = 1000\nbackoff_base = 0.01\n")

    with MockReputationServer(PHISH_FIX / "vt") as server:
        labels_out = tmp_path / "labels.json"
        rc = main(
            [
                "reputation", "scan",
                "--claims", str(claims_out),
                "--scanner-url", server.base_url,
                "--store", str(tmp_path / "reports.sqlite"),
                "--policy", str(policy),
                "--output", str(labels_out),
            ]
        )
        assert rc == 0
        labels = json.loads(labels_out.read_text())
        truth = json.loads((PHISH_FIX / "truth.json").read_text())
        assert {u: v["label"] for u, v in labels.items()} == truth

        monkeypatch.delenv("SCANNER_API_KEY", raising=False)
        rc = main(
            [
                "reputation", "scan", "--live",
                "--claims", str(claims_out),
                "--scanner-url", server.base_url,
                "--store", str(tmp_path / "r2.sqlite"),
                "--output", str(tmp_path / "l2.json"),
            ]
        )
        assert rc == 3  # credential error before any network call


def test_graph_communities_cli(tmp_path, capsys):
    out = tmp_path / "communities.csv"
    dot = tmp_path / "graph.dot"
    rc = main(
        [
            "graph", "communities",
            "--edges", str(PHISH_FIX / "followers.csv"),
            "--seed", "7",
            "--output", str(out),
            "--dot", str(dot),
        ]
    )
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert {r["node"] for r in rows} == {"uA", "uK", "uL", "uM", "uN"}
    assert dot.read_text().startswith("digraph")


def test_stats_compare_cli(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("followers\n" + "\n".join(str(100 + i) for i in range(15)))
    b.write_text("followers\n" + "\n".join(str(500 + 3 * i) for i in range(15)))
    rc = main(
        ["stats", "compare", "--feature", "followers", "--group-a", str(a), "--group-b", str(b)]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "mann-whitney" in out and "p=" in out


def test_stats_compare_missing_column_exit_2(tmp_path):
    a = tmp_path / "a.csv"
    a.write_text("x\n1\n")
    rc = main(["stats", "compare", "--feature", "followers", "--group-a", str(a), "--group-b", str(a)])
    assert rc == 2


def test_annotate_agreement_cli(tmp_path, capsys):
    for name, flip in (("a1", False), ("a2", True)):
        rows = []
        for i in range(10):
            label = "security_privacy" if i % 2 else "irrelevant"
            if flip and i == 3:
                label = "misinformation"
            rows.append({"post_id": f"p{i}", "label": label, "annotator": name})
        (tmp_path / f"{name}.jsonl").write_text("\n".join(json.dumps(r) for r in rows))
    rc = main(
        ["annotate", "agreement", "--labels", str(tmp_path / "a1.jsonl"), str(tmp_path / "a2.jsonl")]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "kappa" in out and "disagreements: 1" in out


def test_report_summary_and_growth_cli(tmp_path, capsys):
    preds = tmp_path / "preds.jsonl"
    rows = []
    for i in range(20):
        relevant = i < 10
        rows.append(
            {
                "post_id": f"p{i}",
                "platform": "reddit",
                "author": f"u{i % 4}",
                "created_at": "2020-04-03T00:00:00Z",
                "relevant": relevant,
                "misinformation": (i < 1) if relevant else None,
            }
        )
    preds.write_text("\n".join(json.dumps(r) for r in rows))
    rc = main(["report", "summary", "--predictions", str(preds), "--output", str(tmp_path / "s.csv")])
    assert rc == 0
    assert "reddit" in capsys.readouterr().out
    rc = main(
        [
            "report", "growth",
            "--predictions", str(preds),
            "--marker", "2020-03-15",
            "--output", str(tmp_path / "g.csv"),
            "--plot", str(tmp_path / "g.json"),
        ]
    )
    assert rc == 0
    plot = json.loads((tmp_path / "g.json").read_text())
    assert plot["markers"] == ["2020-03-15"]
    assert plot["series"]["reddit"][0]["pct"] == 10.0


def test_phishing_run_cli_with_config(tmp_path, capsys):
    with MockReputationServer(PHISH_FIX / "vt") as server:
        config = tmp_path / "cfg.toml"
        config.write_text(
            f"""
[phishing]
workdir = "{tmp_path / 'work'}"

[phishing.ingest]
platform = "twitter"
posts = "{PHISH_FIX / 'posts.jsonl'}"
keywords = "{PHISH_FIX / 'keywords.txt'}"
window = "2021-01-11..2021-04-11"

[phishing.reputation]
scanner_base_url = "{server.base_url}"

[phishing.policy]
rate_limit_per_minute = 1000
backoff_base = 0.01

[phishing.graph]
edges = "{PHISH_FIX / 'followers.csv'}"
seed = 7
"""
        )
        rc = main(["phishing", "run", "-c", str(config)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "benign tweets (misinformation)" in out
        assert (tmp_path / "work" / "prevalence.json").exists()


def test_zoom_run_cli_with_config(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    cfg_dict = synthcorpus.zoom_config(corpus, tmp_path / "work", n_estimators=10, seed=2)
    z = cfg_dict["zoom"]
    config = tmp_path / "zoom.toml"
    config.write_text(
        f"""
[zoom]
workdir = "{z['workdir']}"
seed = {z['seed']}

[[zoom.sources]]
platform = "facebook"
posts = "{z['sources'][0]['posts']}"

[zoom.filter]
keywords = "{z['filter']['keywords']}"
window = "{z['filter']['window']}"

[zoom.train]
groundtruth = "{z['train']['groundtruth']}"
n_estimators = {z['train']['n_estimators']}

[zoom.report]
markers = ["2020-03-15"]
"""
    )
    rc = main(["zoom", "run", "-c", str(config)])
    assert rc == 0
    assert "facebook" in capsys.readouterr().out
    assert (tmp_path / "work" / "summary.csv").exists()


def test_keywords_expand_cli(tmp_path, capsys):
    corpus = tmp_path / "corpus.jsonl"
    rows = []
    for i, term in enumerate(["malware", "privacy", "virus"] * 4):
        rows.append(
            {
                "id": f"k{i}",
                "author": "u1",
                "created_at": "2020-03-05T00:00:00Z",
                "text": f"zoom {term} worry",
            }
        )
    corpus.write_text("\n".join(json.dumps(r) for r in rows))
    allow = tmp_path / "allow.txt"
    allow.write_text("malware\nvirus\n")
    out = tmp_path / "keywords.txt"
    rc = main(
        [
            "keywords", "expand",
            "--corpus", str(corpus),
            "--platform", "twitter",
            "--seeds", "zoom",
            "--threshold", "0.1",
            "--approve-file", str(allow),
            "--output", str(out),
        ]
    )
    assert rc == 0
    kws = out.read_text().splitlines()
    assert "zoom malware" in kws and "zoom virus" in kws
    assert "zoom privacy" not in kws  # not in the allowlist


def test_version_flag():
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


def test_zoom_classify_only_flag_missing_models_exit_2(tmp_path):
    corpus = tmp_path / "corpus"
    cfg_dict = synthcorpus.zoom_config(corpus, tmp_path / "work", n_estimators=5, seed=1)
    z = cfg_dict["zoom"]
    config = tmp_path / "zoom.toml"
    config.write_text(
        f"""
[zoom]
workdir = "{z['workdir']}"

[[zoom.sources]]
platform = "facebook"
posts = "{z['sources'][0]['posts']}"

[zoom.filter]
keywords = "{z['filter']['keywords']}"
"""
    )
    rc = main(["zoom", "run", "-c", str(config), "--stage", "classify-only"])
    assert rc == 2


def test_annotate_run_cli_scripted(tmp_path, monkeypatch, capsys):
    corpus = tmp_path / "corpus.jsonl"
    rows = [
        {"id": "z1", "platform": "reddit", "author": "u1",
         "created_at": "2020-04-01T00:00:00Z", "text": "zoom patched a bug, see blog"},
        {"id": "z2", "platform": "reddit", "author": "u2",
         "created_at": "2020-04-02T00:00:00Z", "text": "zoom is spying, no proof needed"},
    ]
    corpus.write_text("\n".join(json.dumps(r) for r in rows))
    answers = iter(["y", "y", "y", "y", "y", "n"])
    monkeypatch.setattr("builtins.input", lambda prompt="": next(answers))
    out = tmp_path / "labels.jsonl"
    rc = main(
        [
            "annotate", "run",
            "--corpus", str(corpus),
            "--annotator", "A9",
            "--session", str(tmp_path / "s.jsonl"),
            "--output", str(out),
        ]
    )
    assert rc == 0
    labels = [json.loads(l) for l in out.read_text().splitlines()]
    assert [l["label"] for l in labels] == ["security_privacy", "misinformation"]


def test_train_and_classify_cli(tmp_path, capsys):
    corpus_dir = tmp_path / "corpus"
    synthcorpus.generate(corpus_dir, seed=42)
    # normalize the platform-shaped records first
    normalized = tmp_path / "norm.jsonl"
    rc = main(
        [
            "ingest", "--platform", "facebook",
            "--input", str(corpus_dir / "posts.jsonl"),
            "--output", str(normalized),
        ]
    )
    assert rc == 0
    model_path = tmp_path / "misinfo.model.json"
    rc = main(
        [
            "train", "--platform", "facebook", "--stage", "misinfo",
            "--corpus", str(normalized),
            "--groundtruth", str(corpus_dir / "groundtruth.jsonl"),
            "--model", str(model_path),
            "--n-estimators", "15",
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "3-fold CV" in out
    assert model_path.exists() and (tmp_path / "misinfo.model.json.vocab.json").exists()

    preds = tmp_path / "preds.jsonl"
    rc = main(
        ["classify", "--model", str(model_path), "--input", str(normalized), "--output", str(preds)]
    )
    assert rc == 0
    rows = [json.loads(l) for l in preds.read_text().splitlines()]
    assert len(rows) == 3_336
    assert {r["label"] for r in rows} <= {0, 1}


def test_reputation_rescan_cli(tmp_path, capsys):
    from misinfo_sentinel.reputation import ReportStore, ReputationReport

    with MockReputationServer(PHISH_FIX / "vt") as server:
        store_path = tmp_path / "reports.sqlite"
        store = ReportStore(store_path)
        store.append(
            ReputationReport(
                url="http://alpha-login.example/login", scanned_at=1, verdicts=[], source="live"
            )
        )
        store.close()
        policy = tmp_path / "policy.toml"
        policy.write_text("[policy]\nrate_limit_per_minute = 1000\nbackoff_base = 0.01\n")
        rc = main(
            [
                "reputation", "rescan",
                "--scanner-url", server.base_url,
                "--store", str(store_path),
                "--policy", str(policy),
            ]
        )
        assert rc == 0
        assert "rescanned 1 of 1" in capsys.readouterr().out
