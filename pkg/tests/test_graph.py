"""Louvain, network metrics, and echo analysis against brute-force oracles."""

import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from misinfo_sentinel.errors import ArgumentError
from misinfo_sentinel.graph import (
    CommunityPartition,
    FollowGraph,
    directed_modularity,
    echo_analysis,
    louvain,
    network_metrics,
)
from oracles import (
    brute_force_best_modularity,
    floyd_warshall,
    random_graph,
    two_cliques_graph,
)

# --- louvain ---------------------------------------------------------------------


def test_two_cliques_recovered_exactly():
    g = two_cliques_graph()
    partition = louvain(g, seed=7)
    left = {partition.assignment[f"v{i}"] for i in range(4)}
    right = {partition.assignment[f"v{i}"] for i in range(4, 8)}
    assert len(left) == 1 and len(right) == 1 and left != right
    # and the brute-force optimum is the same split
    assert partition.modularity == pytest.approx(brute_force_best_modularity(g), abs=1e-9)


def test_empty_and_edgeless_rejected():
    with pytest.raises(ArgumentError):
        louvain(FollowGraph())
    g = FollowGraph()
    g.add_node("a")
    g.add_node("b")
    with pytest.raises(ArgumentError):
        louvain(g)


def test_two_isolated_dyads():
    g = FollowGraph()
    g.add_edge("a", "b")
    g.add_edge("c", "d")
    partition = louvain(g, seed=0)
    assert partition.n_communities == 2
    assert partition.assignment["a"] == partition.assignment["b"]
    assert partition.assignment["c"] == partition.assignment["d"]


def test_complete_graph_single_community():
    g = FollowGraph()
    for a, b in itertools.permutations(range(5), 2):
        g.add_edge(str(a), str(b))
    partition = louvain(g, seed=1)
    assert partition.n_communities == 1
    assert partition.modularity == pytest.approx(0.0, abs=1e-12)


def test_louvain_within_002_of_bruteforce_on_seeded_graphs():
    sizes = [4, 5, 6, 7, 8] * 9 + [9, 9, 10, 10, 10]
    assert len(sizes) == 50
    for trial, n in enumerate(sizes):
        rng = np.random.default_rng(1000 + trial)
        g = random_graph(rng, n)
        partition = louvain(g, seed=trial)
        optimum = brute_force_best_modularity(g)
        assert partition.modularity >= optimum - 0.02, (trial, n)


def test_level_modularity_never_decreases():
    rng = np.random.default_rng(42)
    for trial in range(10):
        g = random_graph(rng, 12, p=0.3)
        partition = louvain(g, seed=trial)
        levels = partition.level_modularity
        for a, b in zip(levels, levels[1:]):
            assert b >= a - 1e-9
        trivial = directed_modularity(g, {v: 0 for v in g.nodes})
        assert partition.modularity >= trivial - 1e-9


def test_relabeling_gives_isomorphic_partition():
    g = two_cliques_graph()
    base = louvain(g, seed=3)
    relabel = {f"v{i}": f"user-{chr(97 + i)}" for i in range(8)}  # order-preserving
    g2 = FollowGraph()
    for src in g.nodes:
        for dst, w in g.out_edges(src).items():
            g2.add_edge(relabel[src], relabel[dst], w)
    mapped = louvain(g2, seed=3)
    groups_base = {}
    groups_mapped = {}
    for node in g.nodes:
        groups_base.setdefault(base.assignment[node], set()).add(node)
        groups_mapped.setdefault(mapped.assignment[relabel[node]], set()).add(node)
    assert sorted(map(sorted, groups_base.values())) == sorted(map(sorted, groups_mapped.values()))


def test_determinism_per_seed():
    g = two_cliques_graph()
    assert louvain(g, seed=5).assignment == louvain(g, seed=5).assignment


def test_self_loop_rejected():
    g = FollowGraph()
    with pytest.raises(ArgumentError):
        g.add_edge("a", "a")


def test_duplicate_edges_aggregate():
    g = FollowGraph()
    g.add_edge("a", "b", 1.0)
    g.add_edge("a", "b", 2.0)
    assert g.out_edges("a")["b"] == 3.0
    assert g.edge_count == 1


def test_modularity_range_invariant():
    partition = louvain(two_cliques_graph(), seed=0)
    assert -0.5 <= partition.modularity <= 1.0
    with pytest.raises(ArgumentError):
        CommunityPartition(assignment={"a": 0}, modularity=1.5)


# --- metrics ---------------------------------------------------------------------


def test_metrics_directed_path():
    g = FollowGraph()
    g.add_edge("a", "b")
    g.add_edge("b", "c")
    m = network_metrics(g)
    assert m.diameter == 2
    assert m.avg_path_length == pytest.approx(4 / 3)
    assert m.unreachable_pairs == 3


def test_metrics_single_edge_weighted_degree():
    g = FollowGraph()
    g.add_edge("a", "b")
    assert network_metrics(g).avg_weighted_degree == pytest.approx(0.5)


def test_metrics_match_floyd_warshall_oracle():
    rng = np.random.default_rng(99)
    g = random_graph(rng, 10, p=0.3)
    m = network_metrics(g)
    dist = floyd_warshall(g)
    finite = dist[np.isfinite(dist) & (dist > 0)]
    off_diag = dist[~np.eye(len(g.nodes), dtype=bool)]
    assert m.diameter == pytest.approx(finite.max())
    assert m.avg_path_length == pytest.approx(finite.mean())
    assert m.unreachable_pairs == int(np.isinf(off_diag).sum())
    assert m.node_count == 10
    assert m.edge_count == g.edge_count


# --- echo analysis ----------------------------------------------------------------


def _partition(assignment):
    g = FollowGraph()
    nodes = list(assignment)
    for a, b in zip(nodes, nodes[1:]):
        g.add_edge(a, b)
    return CommunityPartition(assignment=assignment, modularity=0.0)


def test_echo_two_users_same_url():
    p = _partition({"u1": 0, "u2": 0})
    claims = {"u1": {"http://x.c"}, "u2": {"http://x.c"}}
    assert echo_analysis(p, claims) == {0: 2}


def test_echo_distinct_urls():
    p = _partition({"u1": 0, "u2": 0})
    claims = {"u1": {"http://x.c"}, "u2": {"http://y.c"}}
    assert echo_analysis(p, claims) == {0: 0}


def test_echo_matches_pairwise_oracle():
    rng = np.random.default_rng(31)
    users = [f"u{i}" for i in range(30)]
    assignment = {u: int(rng.integers(0, 4)) for u in users}
    urls = [f"http://site{i}.example" for i in range(8)]
    claims = {
        u: {urls[int(k)] for k in rng.integers(0, 8, size=int(rng.integers(0, 4)))}
        for u in users
    }
    got = echo_analysis(_partition_from(assignment), claims)

    # O(n^2) direct comparison
    expected = {}
    for comm in set(assignment.values()):
        members = [u for u in users if assignment[u] == comm]
        count = 0
        for u in members:
            if any(
                v != u and (claims.get(u, set()) & claims.get(v, set()))
                for v in members
            ):
                count += 1
        expected[comm] = count
    assert got == expected


def _partition_from(assignment):
    return CommunityPartition(assignment=dict(assignment), modularity=0.0)


def test_from_csv_weighted_edges(tmp_path):
    path = tmp_path / "edges.csv"
    path.write_text("src,dst,weight\na,b,2.5\nb,c\n")
    g = FollowGraph.from_csv(path)
    assert g.out_edges("a")["b"] == 2.5
    assert g.out_edges("b")["c"] == 1.0
