"""Command-line interface.

Exit codes: 0 success, 2 validation problems, 3 external-service
failures, 4 internal errors.  Secrets come from environment variables
(``SCANNER_API_KEY``), never from flags or config files.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import EXIT_INTERNAL, SentinelError

log = logging.getLogger("misinfo_sentinel")


def _read_csv_column(path: str, column: str) -> list[float]:
    values = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if column not in (reader.fieldnames or []):
            from .errors import ArgumentError

            raise ArgumentError(f"{path} has no column {column!r}")
        for row in reader:
            if row[column] != "":
                values.append(float(row[column]))
    return values


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def cmd_ingest(args) -> int:
    from .ingest import (
        Diagnostic,
        KeywordSet,
        drop_retweets,
        filter_language,
        filter_posts,
        load_posts,
        parse_window,
        write_posts,
    )

    diagnostics: list[Diagnostic] = []
    stream = load_posts(args.input, args.platform, diagnostics)
    if not args.include_non_english:
        stream = filter_language(stream)
    if args.dedup_retweets:
        stream = drop_retweets(stream)
    if args.keywords:
        keywords = KeywordSet.from_file(args.keywords)
        window = parse_window(args.window) if args.window else None
        posts = filter_posts(stream, keywords, window=window, same_day=args.same_day)
    else:
        posts = list(stream)
    n = write_posts(args.output, posts)
    for diag in diagnostics:
        log.warning("%s: %s", args.input, diag)
    print(f"wrote {n} posts to {args.output} ({len(diagnostics)} malformed lines skipped)")
    return 0


def cmd_keywords_expand(args) -> int:
    from .ingest import load_posts, snowball_expand
    from .ingest.snowball import composite_keywords

    posts = list(load_posts(args.corpus, args.platform))
    if args.approve_file:
        allow = {line.strip().casefold() for line in open(args.approve_file, encoding="utf-8") if line.strip()}
        approve = lambda token: token in allow
    else:

        def approve(token: str) -> bool:
            answer = input(f"accept keyword {token!r}? [y/n] ").strip().lower()
            return answer in ("y", "yes")

    result = snowball_expand(posts, args.seeds, min_cooccurrence=args.threshold, approve=approve)
    composites = composite_keywords(result)
    out = Path(args.output)
    with open(out, "w", encoding="utf-8") as fh:
        for kw in composites:
            fh.write(kw + "\n")
    print(f"{len(result.accepted)} accepted terms, {len(composites)} composites "
          f"after {result.rounds} rounds -> {out}")
    return 0


def cmd_claims_extract(args) -> int:
    from .claims import extract_claims, unique_urls
    from .ingest import read_posts

    claims = []
    diagnostics: list[str] = []
    for post in read_posts(args.input):
        claims.extend(extract_claims(post, diagnostics))
    with open(args.output, "w", encoding="utf-8") as fh:
        for claim in claims:
            fh.write(json.dumps(claim.to_record(), ensure_ascii=False, sort_keys=True) + "\n")
    for diag in diagnostics:
        log.warning("%s", diag)
    print(f"{len(claims)} claims over {len(unique_urls(claims))} unique urls -> {args.output}")
    return 0


def _load_claims(path):
    from .claims import UrlClaim

    with open(path, encoding="utf-8") as fh:
        return [UrlClaim.from_record(json.loads(line)) for line in fh if line.strip()]


def _scan_setup(args):
    import os

    from .reputation import BlocklistClient, RateLimiter, ReportStore, ScanPolicy, ScannerClient

    policy_cfg = {}
    if args.policy:
        from .pipeline import load_config

        policy_cfg = load_config(args.policy).get("policy", {})
    policy = ScanPolicy.from_dict(policy_cfg)
    api_key = os.environ.get("SCANNER_API_KEY")
    if args.live and not api_key:
        from .errors import CredentialError

        raise CredentialError("--live requires the SCANNER_API_KEY environment variable")
    client = ScannerClient(args.scanner_url, api_key or "offline-fixture-key", timeout=policy.timeout)
    blocklist = BlocklistClient(args.blocklist_url or args.scanner_url)
    store = ReportStore(args.store)
    limiter = RateLimiter(policy.rate_limit_per_minute)
    return policy, client, blocklist, store, limiter


def cmd_reputation_scan(args) -> int:
    from .claims import unique_urls
    from .reputation import blocklist_lookup, classify_url, scan_url

    claims = _load_claims(args.claims)
    policy, client, blocklist, store, limiter = _scan_setup(args)
    labels = {}
    try:
        for url in unique_urls(claims):
            report = scan_url(url, client, policy, store, limiter)
            status = blocklist_lookup(url, blocklist)
            labels[url] = {
                "label": classify_url(report, status, policy),
                "malicious_count": report.malicious_count,
                "benign_count": report.benign_count,
                "blocklist": status,
            }
    finally:
        store.close()
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(labels, fh, ensure_ascii=False, indent=1, sort_keys=True)
        fh.write("\n")
    malicious = sum(1 for v in labels.values() if v["label"] == "malicious")
    print(f"scanned {len(labels)} urls: {malicious} malicious, {len(labels) - malicious} benign -> {args.output}")
    return 0


def cmd_reputation_rescan(args) -> int:
    from .reputation import rescan_pending

    policy, client, _, store, limiter = _scan_setup(args)
    try:
        urls = store.urls()
        refreshed = rescan_pending(urls, client, policy, store, limiter)
    finally:
        store.close()
    print(f"rescanned {len(refreshed)} of {len(urls)} urls past the {policy.recheck_delay_days}-day delay")
    return 0


def cmd_review_export(args) -> int:
    from .reputation import export_review_queue

    labels = json.loads(Path(args.labels).read_text(encoding="utf-8"))
    rows = [(url, "") for url, info in sorted(labels.items())
            if info["label"] == "benign" and info.get("blocklist") == "not_listed"]
    n = export_review_queue(rows, args.output)
    print(f"exported {n} urls for manual review -> {args.output}")
    return 0


def cmd_review_import(args) -> int:
    from .reputation import apply_overrides, import_review

    overrides = import_review(args.file)
    labels = json.loads(Path(args.labels).read_text(encoding="utf-8"))
    flat = {url: info["label"] for url, info in labels.items()}
    updated = apply_overrides(flat, overrides, args.audit)
    for url, label in updated.items():
        if url in labels and labels[url]["label"] != label:
            labels[url]["label"] = label
            labels[url]["overridden"] = True
    with open(args.labels, "w", encoding="utf-8") as fh:
        json.dump(labels, fh, ensure_ascii=False, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"applied {len(overrides)} overrides to {args.labels} (audit: {args.audit})")
    return 0


def cmd_prevalence_report(args) -> int:
    from . import prevalence as prev

    claim_labels = []
    authors = {}
    retweets = {}
    with open(args.claims, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                claim_labels.append(prev.ClaimLabel.from_record(rec))
                authors[rec["post_id"]] = rec["author"]
                retweets[rec["post_id"]] = rec.get("retweets", 0)
    table = prev.prevalence_report(claim_labels, authors)
    for name, value in table.human_rows():
        print(f"{name:>34}: {value}")
    for note in table.notes:
        print(f"  note: {note}")
    if args.output:
        prev.write_report_json(table, args.output)
        print(f"json -> {args.output}")
    if args.csv:
        prev.write_report_csv(table, args.csv)
        print(f"csv -> {args.csv}")
    return 0


def cmd_graph_communities(args) -> int:
    from .graph import FollowGraph, louvain, network_metrics

    g = FollowGraph.from_csv(args.edges)
    if args.undirected:
        g = g.symmetrized()
    partition = louvain(g, resolution=args.resolution, seed=args.seed)
    metrics = network_metrics(g)
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "community"])
        for node in g.nodes:
            writer.writerow([node, partition.assignment[node]])
    print(
        f"{metrics.node_count} nodes, {metrics.edge_count} edges, "
        f"{partition.n_communities} communities, modularity {partition.modularity:.4f}"
    )
    print(
        f"avg weighted degree {metrics.avg_weighted_degree:.2f}, diameter {metrics.diameter:g}, "
        f"avg path length {metrics.avg_path_length:.2f} ({metrics.unreachable_pairs} unreachable pairs)"
    )
    if args.dot:
        Path(args.dot).write_text(g.to_dot(partition), encoding="utf-8")
        print(f"dot export -> {args.dot}")
    return 0


def cmd_stats_compare(args) -> int:
    from . import stats

    a = _read_csv_column(args.group_a, args.feature)
    b = _read_csv_column(args.group_b, args.feature)
    print(f"group A: {stats.describe(a)}")
    print(f"group B: {stats.describe(b)}")
    if args.test == "mann-whitney":
        result = stats.mann_whitney_u(a, b, alternative=args.alternative)
    elif args.test == "welch-t":
        result = stats.welch_t_test(a, b)
    else:  # chi-square over a binary feature
        table = [
            [sum(1 for v in a if v), sum(1 for v in a if not v)],
            [sum(1 for v in b if v), sum(1 for v in b if not v)],
        ]
        result = stats.chi_square_2x2(table)
    print(
        f"{args.test}: statistic={result.statistic:.4f} p={result.p_value:.6g} "
        f"({result.method}, n1={result.n1}, n2={result.n2})"
    )
    return 0


def cmd_annotate_run(args) -> int:
    from .annotate import AnnotationSession, write_labels
    from .ingest import read_posts

    posts = list(read_posts(args.corpus))
    session_path = args.session or f"{args.annotator}.session.jsonl"
    session = AnnotationSession(posts, args.annotator, session_path)
    labels = session.run(limit=args.limit)
    out = args.output or f"{args.annotator}.labels.jsonl"
    write_labels(out, labels)
    print(f"{len(labels)} of {len(posts)} posts labeled; session {session_path}; labels -> {out}")
    return 0


def cmd_annotate_agreement(args) -> int:
    from .annotate import agreement_report, read_labels

    label_sets = [read_labels(path) for path in args.labels]
    report = agreement_report(label_sets)
    print(f"items compared: {report.n_items}")
    print(f"cohen kappa (mean pairwise): {report.kappa:.4f}")
    print(f"multi-coder agreement: {report.multi_coder_score:.4f}")
    print(f"disagreements: {len(report.disagreements)}")
    for d in report.disagreements[: args.show]:
        print(f"  {d['post_id']}: {d['labels']}")
    return 0


def cmd_train(args) -> int:
    import numpy as np

    from .annotate import read_labels
    from .balance import LabeledSet
    from .model import DEFAULT_GRID, ForestConfig, cross_validate, grid_search, save_model, train_forest
    from .pipeline import (
        GENUINE,
        IRRELEVANT,
        MISINFO,
        RELEVANT,
        STAGE1_BALANCE,
        STAGE2_BALANCE,
        TFIDF_K,
        TFIDF_K_DEFAULT,
        _make_balancer,
    )
    from .ingest import load_accounts, read_posts
    from .textfeat import fit_tfidf, preprocess, vectorize_corpus

    posts = [p for p in read_posts(args.corpus) if p.platform == args.platform]
    gt = {lab.post_id: lab.label for lab in read_labels(args.groundtruth)}
    posts = [p for p in posts if p.id in gt]
    if not posts:
        from .errors import ValidationError

        raise ValidationError("no corpus posts match the groundtruth")
    accounts = {}
    if args.accounts:
        accounts = {a.id: a for a in load_accounts(args.accounts, args.platform)}
    vocab = fit_tfidf([preprocess(p.text) for p in posts], k=TFIDF_K.get(args.platform, TFIDF_K_DEFAULT))
    X, names = vectorize_corpus(posts, accounts, vocab, args.platform)
    if args.stage == "relevance":
        y = np.array([RELEVANT if gt[p.id] != "irrelevant" else IRRELEVANT for p in posts])
        balance = STAGE1_BALANCE[args.platform]
    else:
        mask = np.array([gt[p.id] != "irrelevant" for p in posts])
        X, posts = X[mask], [p for p, m in zip(posts, mask) if m]
        y = np.array([MISINFO if gt[p.id] == "misinformation" else GENUINE for p in posts])
        balance = STAGE2_BALANCE[args.platform]
    dataset = LabeledSet(X, y)
    balancer = _make_balancer(balance, args.seed)
    config = ForestConfig(n_estimators=args.n_estimators)
    if args.grid_search:
        result = grid_search(dataset, DEFAULT_GRID, base_config=config, k=3, seed=args.seed, balancer=balancer)
        config, metrics = result.best_config, result.best_metrics
        print(f"grid best: {config}")
    else:
        metrics = cross_validate(dataset, config, k=3, seed=args.seed, balancer=balancer)
    print(
        f"3-fold CV: accuracy {metrics.accuracy:.3f} (+/- {metrics.spread['accuracy']:.3f}), "
        f"f1 {metrics.f1:.3f} (+/- {metrics.spread['f1']:.3f}) [spread = half range; std also recorded]"
    )
    train_set = balancer(dataset) if balancer else dataset
    model = train_forest(
        train_set,
        config,
        seed=args.seed,
        feature_names=names,
        metadata={"platform": args.platform, "stage": args.stage, "balance": balance},
    )
    vocab.save(args.model + ".vocab.json")
    save_model(model, args.model)
    print(f"model -> {args.model} (vocabulary alongside)")
    return 0


def cmd_classify(args) -> int:
    import numpy as np

    from .model import load_model, predict
    from .pipeline import RELEVANT
    from .ingest import load_accounts, read_posts
    from .textfeat import Vocabulary, vectorize_corpus

    model = load_model(args.model)
    vocab = Vocabulary.load(args.vocab or args.model + ".vocab.json")
    platform = model.metadata.get("platform")
    posts = [p for p in read_posts(args.input) if platform is None or p.platform == platform]
    accounts = {}
    if args.accounts:
        accounts = {a.id: a for a in load_accounts(args.accounts, platform)}
    X, _ = vectorize_corpus(posts, accounts, vocab, platform)
    labels = predict(model, X)
    with open(args.output, "w", encoding="utf-8") as fh:
        for post, label in zip(posts, labels):
            fh.write(json.dumps({"post_id": post.id, "label": int(label)}, sort_keys=True) + "\n")
    print(f"classified {len(posts)} posts -> {args.output}")
    return 0


def cmd_report_summary(args) -> int:
    from .report import platform_summary, read_predictions, write_summary_csv

    rows = platform_summary(read_predictions(args.predictions))
    for row in rows:
        r = row.human_row()
        print("  ".join(f"{k}={v}" for k, v in r.items()))
    if args.output:
        write_summary_csv(rows, args.output)
        print(f"csv -> {args.output}")
    return 0


def cmd_report_growth(args) -> int:
    from .report import growth_series, read_predictions, write_growth_csv, write_plot_description

    growth = growth_series(read_predictions(args.predictions), bucket=args.bucket, markers=args.marker)
    write_growth_csv(growth, args.output)
    if args.plot:
        write_plot_description(growth, args.plot)
    for platform, points in growth.series.items():
        shown = ", ".join(f"{p.bucket}:{'-' if p.pct is None else p.pct}" for p in points[:6])
        print(f"{platform}: {shown}{' ...' if len(points) > 6 else ''}")
    print(f"csv -> {args.output}")
    return 0


def cmd_mocknet_serve(args) -> int:
    import time

    from .mocknet import MockReputationServer

    with MockReputationServer(args.fixtures, args.port) as server:
        print(f"mock reputation server on {server.base_url} (Ctrl-C to stop)")
        try:
            while True:
                time.sleep(1)
        except KeyboardInterrupt:
            print("stopping")
    return 0


def cmd_phishing_run(args) -> int:
    from .pipeline import load_config, run_phishing_pipeline

    result = run_phishing_pipeline(load_config(args.config), live=args.live)
    for name, value in result.table.human_rows():
        print(f"{name:>34}: {value}")
    print(f"artifacts in {result.workdir}")
    return 0


def cmd_zoom_run(args) -> int:
    from .pipeline import load_config, run_misinfo_pipeline

    result = run_misinfo_pipeline(load_config(args.config), stage=args.stage)
    for row in result.summaries:
        r = row.human_row()
        print("  ".join(f"{k}={v}" for k, v in r.items()))
    print(f"artifacts in {result.workdir}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="misinfo-sentinel",
        description="Verify phishing claims against URL reputation services and "
        "measure security/privacy misinformation on social platforms.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load, normalize, and filter platform posts")
    p.add_argument("--platform", required=True, choices=["twitter", "facebook", "instagram", "reddit"])
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--keywords", help="keyword file, one per line")
    p.add_argument("--window", help="YYYY-MM-DD..YYYY-MM-DD (inclusive)")
    p.add_argument("--same-day", action="store_true", help="keep only posts from today (UTC)")
    p.add_argument("--dedup-retweets", action="store_true", help="drop plain reshares")
    p.add_argument("--include-non-english", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("keywords", help="keyword-list operations")
    ksub = p.add_subparsers(dest="subcommand", required=True)
    k = ksub.add_parser("expand", help="snowball-expand seed keywords over a corpus")
    k.add_argument("--corpus", required=True)
    k.add_argument("--platform", required=True, choices=["twitter", "facebook", "instagram", "reddit"])
    k.add_argument("--seeds", nargs="+", required=True)
    k.add_argument("--threshold", type=float, default=0.05, help="min co-occurrence rate")
    k.add_argument("--approve-file", help="allowlist file; omit for interactive prompts")
    k.add_argument("--output", required=True)
    k.set_defaults(func=cmd_keywords_expand)

    p = sub.add_parser("claims", help="defanged-URL claim operations")
    csub = p.add_subparsers(dest="subcommand", required=True)
    c = csub.add_parser("extract", help="extract claims from normalized posts")
    c.add_argument("--input", required=True)
    c.add_argument("--output", required=True)
    c.set_defaults(func=cmd_claims_extract)

    p = sub.add_parser("reputation", help="URL reputation operations")
    rsub = p.add_subparsers(dest="subcommand", required=True)
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--scanner-url", required=True)
    shared.add_argument("--blocklist-url")
    shared.add_argument("--store", default="reports.sqlite")
    shared.add_argument("--policy", help="TOML file with a [policy] section")
    shared.add_argument("--live", action="store_true", help="require real credentials")
    r = rsub.add_parser("scan", parents=[shared], help="scan claim urls and classify them")
    r.add_argument("--claims", required=True)
    r.add_argument("--output", required=True)
    r.set_defaults(func=cmd_reputation_scan)
    r = rsub.add_parser("rescan", parents=[shared], help="rescan stored urls past the delay")
    r.set_defaults(func=cmd_reputation_rescan)
    r = rsub.add_parser("review", help="manual review worksheet")
    rrsub = r.add_subparsers(dest="subsubcommand", required=True)
    rr = rrsub.add_parser("export")
    rr.add_argument("--labels", required=True, help="url_labels.json from a scan")
    rr.add_argument("--output", required=True)
    rr.set_defaults(func=cmd_review_export)
    rr = rrsub.add_parser("import")
    rr.add_argument("--file", required=True, help="filled-in worksheet")
    rr.add_argument("--labels", required=True)
    rr.add_argument("--audit", default="review_audit.jsonl")
    rr.set_defaults(func=cmd_review_import)

    p = sub.add_parser("prevalence", help="prevalence arithmetic")
    psub = p.add_subparsers(dest="subcommand", required=True)
    pr = psub.add_parser("report")
    pr.add_argument("--claims", required=True, help="labeled claims jsonl")
    pr.add_argument("--output", help="JSON report path")
    pr.add_argument("--csv", help="CSV report path")
    pr.set_defaults(func=cmd_prevalence_report)

    p = sub.add_parser("graph", help="follower-graph analysis")
    gsub = p.add_subparsers(dest="subcommand", required=True)
    g = gsub.add_parser("communities")
    g.add_argument("--edges", required=True, help="src,dst[,weight] CSV")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--resolution", type=float, default=1.0)
    g.add_argument("--undirected", action="store_true", help="symmetrize before detection")
    g.add_argument("--output", default="communities.csv")
    g.add_argument("--dot", help="also write a DOT export")
    g.set_defaults(func=cmd_graph_communities)

    p = sub.add_parser("stats", help="statistical comparisons")
    ssub = p.add_subparsers(dest="subcommand", required=True)
    s = ssub.add_parser("compare")
    s.add_argument("--feature", required=True)
    s.add_argument("--group-a", required=True)
    s.add_argument("--group-b", required=True)
    s.add_argument("--test", choices=["mann-whitney", "welch-t", "chi-square"], default="mann-whitney")
    s.add_argument("--alternative", choices=["two_sided", "less", "greater"], default="two_sided")
    s.set_defaults(func=cmd_stats_compare)

    p = sub.add_parser("annotate", help="groundtruth annotation")
    asub = p.add_subparsers(dest="subcommand", required=True)
    a = asub.add_parser("run")
    a.add_argument("--corpus", required=True)
    a.add_argument("--annotator", required=True)
    a.add_argument("--session")
    a.add_argument("--output")
    a.add_argument("--limit", type=int)
    a.set_defaults(func=cmd_annotate_run)
    a = asub.add_parser("agreement")
    a.add_argument("--labels", nargs="+", required=True)
    a.add_argument("--show", type=int, default=10, help="disagreements to print")
    a.set_defaults(func=cmd_annotate_agreement)

    p = sub.add_parser("train", help="train a relevance or misinformation classifier")
    p.add_argument("--platform", required=True, choices=["twitter", "facebook", "instagram", "reddit"])
    p.add_argument("--stage", required=True, choices=["relevance", "misinfo"])
    p.add_argument("--corpus", required=True, help="normalized posts jsonl")
    p.add_argument("--groundtruth", required=True, help="label jsonl")
    p.add_argument("--accounts")
    p.add_argument("--model", required=True, help="output model file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-estimators", type=int, default=100)
    p.add_argument("--grid-search", action="store_true", help="exhaustive hyperparameter search")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="apply a trained model to posts")
    p.add_argument("--model", required=True)
    p.add_argument("--vocab")
    p.add_argument("--input", required=True)
    p.add_argument("--accounts")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("report", help="summaries over predictions")
    rsub2 = p.add_subparsers(dest="subcommand", required=True)
    r = rsub2.add_parser("summary")
    r.add_argument("--predictions", required=True)
    r.add_argument("--output")
    r.set_defaults(func=cmd_report_summary)
    r = rsub2.add_parser("growth")
    r.add_argument("--predictions", required=True)
    r.add_argument("--bucket", default="month")
    r.add_argument("--marker", action="append", default=[], help="event date, e.g. 2020-03-15")
    r.add_argument("--output", default="growth.csv")
    r.add_argument("--plot", help="also write a plot-description JSON")
    r.set_defaults(func=cmd_report_growth)

    p = sub.add_parser("mocknet", help="mock reputation services")
    msub = p.add_subparsers(dest="subcommand", required=True)
    m = msub.add_parser("serve")
    m.add_argument("--fixtures", required=True)
    m.add_argument("--port", type=int, default=8099)
    m.set_defaults(func=cmd_mocknet_serve)

    p = sub.add_parser("phishing", help="phishing-claim verification pipeline")
    phsub = p.add_subparsers(dest="subcommand", required=True)
    ph = phsub.add_parser("run")
    ph.add_argument("-c", "--config", required=True)
    ph.add_argument("--live", action="store_true")
    ph.set_defaults(func=cmd_phishing_run)

    p = sub.add_parser("zoom", help="security/privacy misinformation pipeline")
    zsub = p.add_subparsers(dest="subcommand", required=True)
    z = zsub.add_parser("run")
    z.add_argument("-c", "--config", required=True)
    z.add_argument("--stage", choices=["full", "classify-only"], help="override the config stage")
    z.set_defaults(func=cmd_zoom_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except SentinelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # pragma: no cover - defensive
        log.exception("internal error: %s", exc)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
