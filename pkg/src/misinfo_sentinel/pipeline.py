"""The two end-to-end pipelines, driven by one TOML config file.

Phishing:  ingest -> keyword/window filter -> claim extraction -> URL
scanning and classification -> claim labeling -> prevalence, campaigns,
and (optionally) follower-graph analysis.

Zoom-style misinformation:  ingest -> keyword filter -> train or load the
two classifier stages from groundtruth -> classify -> platform summaries
and growth series.

Every stage writes one checkpoint file into the work directory and is
skipped when its checkpoint already exists, so an interrupted run resumes
where it stopped.  All checkpoint serialization is deterministic (sorted
keys, no wall-clock stamps), which makes reruns byte-identical under
fixed seeds.  Secrets never live in the config: the scanner key comes
from an environment variable, checked before any network call.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import prevalence as prev
from . import report as report_mod
from .balance import LabeledSet, METHODS as BALANCE_METHODS
from .claims import UrlClaim, extract_claims, unique_urls
from .errors import CredentialError, ValidationError
from .graph import FollowGraph, echo_analysis, louvain, network_metrics
from .ingest import (
    Account,
    KeywordSet,
    drop_retweets,
    filter_language,
    filter_posts,
    load_accounts,
    load_posts,
    parse_window,
    read_posts,
    write_posts,
)
from .model import (
    ForestConfig,
    Metrics,
    compute_metrics,
    load_model,
    predict,
    save_model,
    train_forest,
)
from .reputation import (
    BlocklistClient,
    RateLimiter,
    ReportStore,
    ScanPolicy,
    ScannerClient,
    apply_overrides,
    blocklist_lookup,
    classify_url,
    export_review_queue,
    import_review,
    scan_url,
)
from .textfeat import Vocabulary, fit_tfidf, preprocess, vectorize_corpus

DEFAULT_API_KEY_ENV = "SCANNER_API_KEY"

# Rebalancing choices per platform, per classifier stage.
STAGE1_BALANCE = {"instagram": "random", "facebook": "smote", "reddit": "smote", "twitter": None}
STAGE2_BALANCE = {"instagram": "random", "reddit": "random", "facebook": "smote", "twitter": "smote"}
TFIDF_K = {"instagram": 500}
TFIDF_K_DEFAULT = 100

RELEVANT, IRRELEVANT = 0, 1  # stage-1 labels
GENUINE, MISINFO = 0, 1  # stage-2 labels


def load_config(path) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _dump_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# phishing pipeline
# ---------------------------------------------------------------------------


@dataclass
class PhishingResult:
    workdir: Path
    url_labels: dict[str, str]
    table: prev.PrevalenceTable
    campaign_rows: int
    checkpoints: dict[str, Path] = field(default_factory=dict)


def run_phishing_pipeline(config: dict, live: bool = False, log=print) -> PhishingResult:
    cfg = config["phishing"]
    workdir = Path(cfg["workdir"])
    workdir.mkdir(parents=True, exist_ok=True)
    checkpoints: dict[str, Path] = {}

    rep_cfg = cfg.get("reputation", {})
    api_key_env = rep_cfg.get("api_key_env", DEFAULT_API_KEY_ENV)
    api_key = os.environ.get(api_key_env)
    if live and not api_key:
        raise CredentialError(f"--live requires the {api_key_env} environment variable")
    if not api_key:
        api_key = "offline-fixture-key"  # mock server checks presence only

    # stage 1: ingest + filter
    filtered_path = workdir / "filtered_posts.jsonl"
    checkpoints["filtered_posts"] = filtered_path
    ing = cfg["ingest"]
    if filtered_path.exists():
        log(f"[phishing] resume: {filtered_path}")
        posts = list(read_posts(filtered_path))
    else:
        stream = load_posts(ing["posts"], ing["platform"])
        if ing.get("english_only", True):
            stream = filter_language(stream)
        if ing.get("dedup_retweets", False):
            stream = drop_retweets(stream)
        window = parse_window(ing["window"]) if ing.get("window") else None
        keywords = KeywordSet.from_file(ing["keywords"])
        posts = filter_posts(stream, keywords, window=window)
        write_posts(filtered_path, posts)
        log(f"[phishing] filtered posts: {len(posts)} -> {filtered_path}")

    authors = {p.id: p.author_id for p in posts}
    retweets = {p.id: p.reactions.shares or 0 for p in posts}

    # stage 2: claim extraction
    claims_path = workdir / "claims.jsonl"
    checkpoints["claims"] = claims_path
    if claims_path.exists():
        log(f"[phishing] resume: {claims_path}")
        with open(claims_path, encoding="utf-8") as fh:
            claims = [UrlClaim.from_record(json.loads(line)) for line in fh if line.strip()]
    else:
        claims = []
        diagnostics: list[str] = []
        for post in posts:
            claims.extend(extract_claims(post, diagnostics))
        with open(claims_path, "w", encoding="utf-8") as fh:
            for claim in claims:
                fh.write(json.dumps(claim.to_record(), ensure_ascii=False, sort_keys=True) + "\n")
        log(f"[phishing] claims: {len(claims)} ({len(diagnostics)} dropped) -> {claims_path}")

    grouped = unique_urls(claims)

    # stage 3: scan + classify urls
    labels_path = workdir / "url_labels.json"
    checkpoints["url_labels"] = labels_path
    if labels_path.exists():
        log(f"[phishing] resume: {labels_path}")
        label_info = json.loads(labels_path.read_text(encoding="utf-8"))
    else:
        policy = ScanPolicy.from_dict(cfg.get("policy", {}))
        scanner = ScannerClient(rep_cfg["scanner_base_url"], api_key, timeout=policy.timeout)
        blocklist = BlocklistClient(rep_cfg.get("blocklist_base_url", rep_cfg["scanner_base_url"]))
        limiter = RateLimiter(policy.rate_limit_per_minute)
        store = ReportStore(workdir / "reports.sqlite")
        label_info = {}
        for url in grouped:
            report = scan_url(url, scanner, policy, store, limiter)
            status = blocklist_lookup(url, blocklist)
            label = classify_url(report, status, policy)
            label_info[url] = {
                "label": label,
                "malicious_count": report.malicious_count,
                "benign_count": report.benign_count,
                "blocklist": status,
                "threshold": policy.malicious_threshold,
            }
        store.close()

        review_queue = workdir / "review_queue.csv"
        benign = [
            (url, grouped[url][0])
            for url in grouped
            if label_info[url]["label"] == "benign" and label_info[url]["blocklist"] == "not_listed"
        ]
        export_review_queue(benign, review_queue)
        checkpoints["review_queue"] = review_queue

        review_file = rep_cfg.get("review_file") or None
        if review_file and Path(review_file).exists():
            overrides = import_review(review_file)
            labels_only = {u: info["label"] for u, info in label_info.items()}
            updated = apply_overrides(labels_only, overrides, workdir / "review_audit.jsonl")
            for url, label in updated.items():
                if url in label_info and label_info[url]["label"] != label:
                    label_info[url]["label"] = label
                    label_info[url]["overridden"] = True
        _dump_json(labels_path, label_info)
        log(f"[phishing] url labels: {len(label_info)} -> {labels_path}")

    url_labels = {url: info["label"] for url, info in label_info.items()}

    # stage 4: label claims
    labeled_path = workdir / "labeled_claims.jsonl"
    checkpoints["labeled_claims"] = labeled_path
    if labeled_path.exists():
        log(f"[phishing] resume: {labeled_path}")
        claim_labels = []
        with open(labeled_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    claim_labels.append(prev.ClaimLabel.from_record(rec))
                    authors.setdefault(rec["post_id"], rec.get("author", ""))
                    retweets.setdefault(rec["post_id"], rec.get("retweets", 0))
    else:
        claim_labels = prev.label_claims(claims, url_labels)
        with open(labeled_path, "w", encoding="utf-8") as fh:
            for cl in claim_labels:
                rec = cl.to_record()
                rec["author"] = authors[cl.post_id]
                rec["retweets"] = retweets.get(cl.post_id, 0)
                fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
        log(f"[phishing] labeled claims -> {labeled_path}")

    # stage 5: prevalence + campaigns
    table = prev.prevalence_report(claim_labels, authors)
    false_claims = [cl for cl in claim_labels if cl.verdict == prev.FALSE_CLAIM]
    summaries, rate_hist = prev.false_claim_rates(claim_labels, authors)
    spread = prev.retweet_spread(false_claims, retweets)
    min_tweets = cfg.get("prevalence", {}).get("campaign_min_tweets", 4)
    campaigns = prev.campaign_urls(false_claims, authors, min_tweets=min_tweets)

    prevalence_path = workdir / "prevalence.json"
    checkpoints["prevalence"] = prevalence_path
    _dump_json(
        prevalence_path,
        {
            "table": table.to_dict(),
            "false_claim_rate_histogram": {"edges": rate_hist.edges, "counts": rate_hist.counts},
            "retweet_spread": {
                "edges": spread.histogram.edges,
                "counts": spread.histogram.counts,
                "urls_total": spread.urls_total,
                "urls_retweeted_more_than_once": spread.urls_retweeted_more_than_once,
            },
            "campaigns": {
                "min_tweets": min_tweets,
                "rows": [
                    {"url": url, "tweets": t, "users": u} for url, t, u in campaigns.rows
                ],
                "distinct_users_total": campaigns.distinct_users_total,
            },
        },
    )
    prev.write_report_csv(table, workdir / "prevalence.csv")
    checkpoints["prevalence_csv"] = workdir / "prevalence.csv"
    campaigns_path = workdir / "campaigns.csv"
    checkpoints["campaigns"] = campaigns_path
    with open(campaigns_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["url", "tweet_count", "distinct_users"])
        for url, t, u in campaigns.rows:
            writer.writerow([url, t, u])
    log(f"[phishing] prevalence -> {prevalence_path}")

    # stage 6 (optional): follower graph
    graph_cfg = cfg.get("graph", {})
    if graph_cfg.get("edges"):
        g = FollowGraph.from_csv(graph_cfg["edges"])
        partition = louvain(
            g, resolution=graph_cfg.get("resolution", 1.0), seed=graph_cfg.get("seed", 0)
        )
        metrics = network_metrics(g)
        user_urls: dict[str, set[str]] = {}
        for cl in false_claims:
            user_urls.setdefault(authors[cl.post_id], set()).add(cl.canonical_url)
        echo = echo_analysis(partition, user_urls)
        communities_path = workdir / "communities.csv"
        with open(communities_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["node", "community"])
            for node in g.nodes:
                writer.writerow([node, partition.assignment[node]])
        _dump_json(
            workdir / "graph_metrics.json",
            {
                "node_count": metrics.node_count,
                "edge_count": metrics.edge_count,
                "avg_weighted_degree": metrics.avg_weighted_degree,
                "diameter": metrics.diameter,
                "avg_path_length": metrics.avg_path_length,
                "unreachable_pairs": metrics.unreachable_pairs,
                "modularity": partition.modularity,
                "n_communities": partition.n_communities,
                "echo_users_per_community": {str(k): v for k, v in echo.items()},
                "echo_users_total": sum(echo.values()),
            },
        )
        checkpoints["communities"] = communities_path
        checkpoints["graph_metrics"] = workdir / "graph_metrics.json"
        log(f"[phishing] graph: {partition.n_communities} communities -> {communities_path}")

    return PhishingResult(
        workdir=workdir,
        url_labels=url_labels,
        table=table,
        campaign_rows=len(campaigns.rows),
        checkpoints=checkpoints,
    )


# ---------------------------------------------------------------------------
# zoom-style misinformation pipeline
# ---------------------------------------------------------------------------


def _metrics_dict(m: Metrics) -> dict:
    out = {
        "accuracy": m.accuracy,
        "precision": m.precision,
        "recall": m.recall,
        "f1": m.f1,
        "averaging": m.averaging,
    }
    if m.per_fold:
        out["per_fold"] = m.per_fold
        out["spread_half_range"] = m.spread
        out["std"] = m.std
    return out


def _holdout_split(y: np.ndarray, fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Stratified train/holdout index split."""
    rng = np.random.default_rng(seed)
    train_idx, hold_idx = [], []
    for label in np.unique(y):
        members = np.flatnonzero(y == label)
        members = members[rng.permutation(len(members))]
        n_hold = max(1, int(round(len(members) * fraction)))
        hold_idx.extend(members[:n_hold].tolist())
        train_idx.extend(members[n_hold:].tolist())
    return np.asarray(sorted(train_idx)), np.asarray(sorted(hold_idx))


def _make_balancer(method: str | None, seed: int):
    if method is None:
        return None
    fn = BALANCE_METHODS[method]
    return lambda ls: fn(ls, seed=seed)


@dataclass
class ZoomResult:
    workdir: Path
    summaries: list[report_mod.PlatformSummary]
    training_report: dict
    checkpoints: dict[str, Path] = field(default_factory=dict)


def run_misinfo_pipeline(config: dict, log=print, stage: str | None = None) -> ZoomResult:
    cfg = config["zoom"]
    workdir = Path(cfg["workdir"])
    workdir.mkdir(parents=True, exist_ok=True)
    (workdir / "models").mkdir(exist_ok=True)
    seed = int(cfg.get("seed", 0))
    checkpoints: dict[str, Path] = {}

    # stage 1: ingest + filter each source
    filtered_path = workdir / "filtered_posts.jsonl"
    checkpoints["filtered_posts"] = filtered_path
    accounts: dict[str, Account] = {}
    for source in cfg["sources"]:
        if source.get("accounts"):
            for account in load_accounts(source["accounts"], source["platform"]):
                accounts[account.id] = account
    if filtered_path.exists():
        log(f"[zoom] resume: {filtered_path}")
        posts = list(read_posts(filtered_path))
    else:
        filt = cfg.get("filter", {})
        keywords = KeywordSet.from_file(filt["keywords"]) if filt.get("keywords") else None
        window = parse_window(filt["window"]) if filt.get("window") else None
        posts = []
        for source in cfg["sources"]:
            stream = load_posts(source["posts"], source["platform"])
            if filt.get("english_only", True):
                stream = filter_language(stream)
            if keywords is not None:
                posts.extend(filter_posts(stream, keywords, window=window))
            else:
                posts.extend(
                    p for p in stream if window is None or window[0] <= p.created_at <= window[1]
                )
        write_posts(filtered_path, posts)
        log(f"[zoom] filtered posts: {len(posts)} -> {filtered_path}")

    platforms = sorted({p.platform for p in posts})

    # stage 2: train or load per-platform model pairs
    train_cfg = cfg.get("train", {})
    groundtruth_path = train_cfg.get("groundtruth")
    stage = stage or cfg.get("stage", "full")  # "full" or "classify-only"
    report_path = workdir / "training_report.json"
    checkpoints["training_report"] = report_path

    model_paths = {
        platform: {
            "relevance": workdir / "models" / f"{platform}_relevance.model.json",
            "misinfo": workdir / "models" / f"{platform}_misinfo.model.json",
            "vocab": workdir / "models" / f"{platform}_vocab.json",
        }
        for platform in platforms
    }

    missing = [
        str(path)
        for paths in model_paths.values()
        for path in paths.values()
        if not path.exists()
    ]
    if stage == "classify-only" and missing:
        raise ValidationError("classify-only run but model files are missing: " + ", ".join(missing))

    training_report: dict = {}
    if not missing and report_path.exists():
        log("[zoom] resume: models already trained")
        training_report = json.loads(report_path.read_text(encoding="utf-8"))
    elif stage != "classify-only":
        if not groundtruth_path:
            raise ValidationError("training requires train.groundtruth in the config")
        from .annotate import read_labels

        gt_labels = {lab.post_id: lab.label for lab in read_labels(groundtruth_path)}
        gt_posts = [p for p in posts if p.id in gt_labels]
        if not gt_posts:
            raise ValidationError("no filtered post matches the groundtruth labels")
        forest_config = ForestConfig(
            n_estimators=int(train_cfg.get("n_estimators", 100)),
            max_depth=int(train_cfg["max_depth"]) if train_cfg.get("max_depth") else None,
            min_samples_split=int(train_cfg.get("min_samples_split", 2)),
        )
        holdout_fraction = float(train_cfg.get("holdout_fraction", 0.25))
        for platform in platforms:
            plat_posts = [p for p in gt_posts if p.platform == platform]
            if not plat_posts:
                raise ValidationError(f"no groundtruth posts for platform {platform}")
            k = TFIDF_K.get(platform, TFIDF_K_DEFAULT)
            vocab = fit_tfidf([preprocess(p.text) for p in plat_posts], k=k)
            vocab.save(model_paths[platform]["vocab"])
            vocab_hash = hashlib.sha256(
                model_paths[platform]["vocab"].read_bytes()
            ).hexdigest()
            X, names = vectorize_corpus(plat_posts, accounts, vocab, platform)
            y1 = np.array(
                [RELEVANT if gt_labels[p.id] != "irrelevant" else IRRELEVANT for p in plat_posts]
            )
            entry: dict = {"tfidf_k": k, "n_groundtruth": len(plat_posts)}
            training_report[platform] = entry
            for stage_name, y, balance_table, mask in (
                ("relevance", y1, STAGE1_BALANCE, np.ones(len(plat_posts), dtype=bool)),
                (
                    "misinfo",
                    np.array(
                        [
                            MISINFO if gt_labels[p.id] == "misinformation" else GENUINE
                            for p in plat_posts
                        ]
                    ),
                    STAGE2_BALANCE,
                    np.array([gt_labels[p.id] != "irrelevant" for p in plat_posts]),
                ),
            ):
                Xs, ys = X[mask], y[mask]
                balancer = _make_balancer(balance_table[platform], seed)
                train_idx, hold_idx = _holdout_split(ys, holdout_fraction, seed)
                train_set = LabeledSet(Xs[train_idx], ys[train_idx])
                if balancer is not None:
                    train_set = balancer(train_set)
                probe = train_forest(train_set, forest_config, seed=seed, feature_names=names)
                holdout_metrics = compute_metrics(ys[hold_idx], predict(probe, Xs[hold_idx]))
                full_set = LabeledSet(Xs, ys)
                if balancer is not None:
                    full_set = balancer(full_set)
                model = train_forest(
                    full_set,
                    forest_config,
                    seed=seed,
                    feature_names=names,
                    metadata={
                        "platform": platform,
                        "stage": stage_name,
                        "balance": balance_table[platform],
                        "tfidf_k": k,
                        "vocab_sha256": vocab_hash,
                        "seed": seed,
                    },
                )
                save_model(model, model_paths[platform][stage_name])
                entry[stage_name] = {
                    "balance": balance_table[platform],
                    "class_counts": {str(k_): int(v) for k_, v in zip(*np.unique(ys, return_counts=True))},
                    "holdout": _metrics_dict(holdout_metrics),
                }
                if train_cfg.get("cross_validate", False):
                    from .model import cross_validate

                    entry[stage_name]["cv"] = _metrics_dict(
                        cross_validate(LabeledSet(Xs, ys), forest_config, k=3, seed=seed, balancer=balancer)
                    )
            log(f"[zoom] trained models for {platform}")
        _dump_json(report_path, training_report)

    # stage 3: classify everything
    predictions_path = workdir / "predictions.jsonl"
    checkpoints["predictions"] = predictions_path
    if predictions_path.exists():
        log(f"[zoom] resume: {predictions_path}")
        predictions = report_mod.read_predictions(predictions_path)
    else:
        predictions = []
        for platform in platforms:
            plat_posts = [p for p in posts if p.platform == platform]
            vocab = Vocabulary.load(model_paths[platform]["vocab"])
            relevance = load_model(model_paths[platform]["relevance"])
            misinfo = load_model(model_paths[platform]["misinfo"])
            X, _ = vectorize_corpus(plat_posts, accounts, vocab, platform)
            stage1 = predict(relevance, X)
            relevant_idx = np.flatnonzero(stage1 == RELEVANT)
            stage2 = np.zeros(len(plat_posts), dtype=int)
            if len(relevant_idx):
                stage2[relevant_idx] = predict(misinfo, X[relevant_idx])
            for i, post in enumerate(plat_posts):
                relevant = bool(stage1[i] == RELEVANT)
                predictions.append(
                    report_mod.PredictionRecord(
                        post_id=post.id,
                        platform=platform,
                        author_id=post.author_id,
                        created_at=post.created_at,
                        relevant=relevant,
                        misinformation=bool(stage2[i] == MISINFO) if relevant else None,
                    )
                )
        report_mod.write_predictions(predictions_path, predictions)
        log(f"[zoom] predictions: {len(predictions)} -> {predictions_path}")

    # stage 4: report
    summaries = report_mod.platform_summary(predictions)
    rep_cfg = cfg.get("report", {})
    growth = report_mod.growth_series(
        predictions, bucket=rep_cfg.get("growth_bucket", "month"), markers=rep_cfg.get("markers", [])
    )
    summary_csv = workdir / "summary.csv"
    report_mod.write_summary_csv(summaries, summary_csv)
    _dump_json(
        workdir / "summary.json",
        {
            r.platform: {
                "total": r.total,
                "relevant_count": r.relevant_count,
                "relevant_pct": r.relevant_pct,
                "misinfo_count": r.misinfo_count,
                "misinfo_pct": r.misinfo_pct,
                "unique_misinfo_users": r.unique_misinfo_users,
            }
            for r in summaries
        },
    )
    report_mod.write_growth_csv(growth, workdir / "growth.csv")
    report_mod.write_plot_description(growth, workdir / "growth.json")
    checkpoints["summary"] = summary_csv
    checkpoints["growth"] = workdir / "growth.csv"
    log(f"[zoom] report -> {summary_csv}")

    return ZoomResult(
        workdir=workdir,
        summaries=summaries,
        training_report=training_report,
        checkpoints=checkpoints,
    )
