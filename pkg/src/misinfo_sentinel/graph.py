"""Follower-graph analysis: Louvain communities, path metrics, echo counts.

Louvain runs the usual two phases (greedy local moves to a modularity
fixpoint, then community aggregation) but scores directed graphs with the
directed modularity

    Q = (1/m) * sum_ij [A_ij - k_i_out * k_j_in / m] * delta(c_i, c_j)

where m is the total edge weight.  Moves are deterministic: nodes are
visited in ascending-id order shuffled once per level by the seed, and
gain ties go to the lowest community id.
"""

from __future__ import annotations

import csv
import heapq
import random
from dataclasses import dataclass, field

from .errors import ArgumentError


class FollowGraph:
    """Directed weighted graph of follower -> followee edges."""

    def __init__(self):
        self._out: dict[str, dict[str, float]] = {}
        self._in: dict[str, dict[str, float]] = {}

    def add_node(self, node: str):
        self._out.setdefault(node, {})
        self._in.setdefault(node, {})

    def add_edge(self, src: str, dst: str, weight: float = 1.0):
        if src == dst:
            raise ArgumentError(f"self-loop on {src!r} is not allowed")
        if weight <= 0:
            raise ArgumentError("edge weight must be positive")
        self.add_node(src)
        self.add_node(dst)
        self._out[src][dst] = self._out[src].get(dst, 0.0) + weight
        self._in[dst][src] = self._in[dst].get(src, 0.0) + weight

    @classmethod
    def from_edges(cls, edges) -> "FollowGraph":
        g = cls()
        for edge in edges:
            if len(edge) == 2:
                g.add_edge(str(edge[0]), str(edge[1]))
            else:
                g.add_edge(str(edge[0]), str(edge[1]), float(edge[2]))
        return g

    @classmethod
    def from_csv(cls, path) -> "FollowGraph":
        """Edge list ``src,dst[,weight]``; a ``src`` header row is skipped."""
        g = cls()
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().lower() in ("src", "source", "follower"):
                    continue
                if len(row) >= 3 and row[2].strip():
                    g.add_edge(row[0].strip(), row[1].strip(), float(row[2]))
                else:
                    g.add_edge(row[0].strip(), row[1].strip())
        return g

    @property
    def nodes(self) -> list[str]:
        return sorted(self._out)

    @property
    def node_count(self) -> int:
        return len(self._out)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._out.values())

    def total_weight(self) -> float:
        return sum(w for nbrs in self._out.values() for w in nbrs.values())

    def out_edges(self, node: str) -> dict[str, float]:
        return self._out[node]

    def in_edges(self, node: str) -> dict[str, float]:
        return self._in[node]

    def symmetrized(self) -> "FollowGraph":
        """Undirected view: each arc mirrored (weights aggregate)."""
        g = FollowGraph()
        for node in self._out:
            g.add_node(node)
        for src, nbrs in self._out.items():
            for dst, w in nbrs.items():
                g.add_edge(src, dst, w)
                g.add_edge(dst, src, w)
        return g

    def to_dot(self, partition: "CommunityPartition | None" = None) -> str:
        lines = ["digraph follows {"]
        for node in self.nodes:
            if partition is not None:
                lines.append(f'  "{node}" [community={partition.assignment[node]}];')
            else:
                lines.append(f'  "{node}";')
        for src in self.nodes:
            for dst in sorted(self._out[src]):
                w = self._out[src][dst]
                attr = f' [weight={w:g}]' if w != 1.0 else ""
                lines.append(f'  "{src}" -> "{dst}"{attr};')
        lines.append("}")
        return "\n".join(lines)


@dataclass
class CommunityPartition:
    assignment: dict[str, int]
    modularity: float
    level_modularity: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not (-0.5 - 1e-9 <= self.modularity <= 1.0 + 1e-9):
            raise ArgumentError(f"modularity {self.modularity} outside [-0.5, 1]")

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def members(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for node, comm in self.assignment.items():
            out.setdefault(comm, []).append(node)
        for comm in out:
            out[comm].sort()
        return out


def directed_modularity(graph: FollowGraph, assignment: dict[str, int], resolution: float = 1.0) -> float:
    """Leicht-Newman directed modularity of ``assignment`` on ``graph``."""
    m = graph.total_weight()
    if m <= 0:
        raise ArgumentError("modularity needs at least one edge")
    intra = 0.0
    k_out: dict[int, float] = {}
    k_in: dict[int, float] = {}
    for node in graph.nodes:
        c = assignment[node]
        k_out[c] = k_out.get(c, 0.0) + sum(graph.out_edges(node).values())
        k_in[c] = k_in.get(c, 0.0) + sum(graph.in_edges(node).values())
        for dst, w in graph.out_edges(node).items():
            if assignment[dst] == c:
                intra += w
    null = sum(k_out[c] * k_in.get(c, 0.0) for c in k_out)
    return intra / m - resolution * null / (m * m)


class _Level:
    """Adjacency view used inside Louvain; allows self-loops after aggregation."""

    def __init__(self, out_adj: list[dict[int, float]], in_adj: list[dict[int, float]]):
        self.out_adj = out_adj
        self.in_adj = in_adj
        self.n = len(out_adj)
        self.k_out = [sum(nbrs.values()) for nbrs in out_adj]
        self.k_in = [sum(nbrs.values()) for nbrs in in_adj]
        self.m = sum(self.k_out)


def _local_moves(level: _Level, resolution: float, order: list[int]) -> tuple[list[int], bool]:
    comm = list(range(level.n))
    comm_k_out = list(level.k_out)
    comm_k_in = list(level.k_in)
    m = level.m
    moved_any = False
    moved = True
    while moved:
        moved = False
        for i in order:
            old = comm[i]
            comm_k_out[old] -= level.k_out[i]
            comm_k_in[old] -= level.k_in[i]
            # weight from i into each candidate community and back
            w_to: dict[int, float] = {}
            w_from: dict[int, float] = {}
            for j, w in level.out_adj[i].items():
                if j != i:
                    w_to[comm[j]] = w_to.get(comm[j], 0.0) + w
            for j, w in level.in_adj[i].items():
                if j != i:
                    w_from[comm[j]] = w_from.get(comm[j], 0.0) + w
            # candidates in ascending id order, so the lowest id wins ties
            candidates = sorted(set(w_to) | set(w_from) | {old})
            best_comm = None
            best_gain = 0.0
            for c in candidates:
                gain = (w_to.get(c, 0.0) + w_from.get(c, 0.0)) / m - resolution * (
                    level.k_out[i] * comm_k_in[c] + level.k_in[i] * comm_k_out[c]
                ) / (m * m)
                if best_comm is None or gain > best_gain + 1e-12:
                    best_comm, best_gain = c, gain
            comm_k_out[best_comm] += level.k_out[i]
            comm_k_in[best_comm] += level.k_in[i]
            if best_comm != old:
                comm[i] = best_comm
                moved = True
                moved_any = True
    return comm, moved_any


def _aggregate(level: _Level, comm: list[int]) -> tuple[_Level, list[int]]:
    labels = sorted(set(comm))
    remap = {c: idx for idx, c in enumerate(labels)}
    n_new = len(labels)
    out_adj: list[dict[int, float]] = [dict() for _ in range(n_new)]
    in_adj: list[dict[int, float]] = [dict() for _ in range(n_new)]
    for i in range(level.n):
        ci = remap[comm[i]]
        for j, w in level.out_adj[i].items():
            cj = remap[comm[j]]
            out_adj[ci][cj] = out_adj[ci].get(cj, 0.0) + w
            in_adj[cj][ci] = in_adj[cj].get(ci, 0.0) + w
    return _Level(out_adj, in_adj), [remap[c] for c in comm]


def louvain(
    graph: FollowGraph,
    resolution: float = 1.0,
    seed: int = 0,
    restarts: int = 4,
) -> CommunityPartition:
    """Two-phase Louvain with directed modularity; deterministic per seed.

    Greedy local moving can stall in a poor optimum on small dense graphs,
    so a handful of restarts with sub-seeded visit orders run and the best
    partition wins (ties keep the earliest restart).  The whole procedure
    is a pure function of (graph, resolution, seed, restarts).
    """
    if restarts < 1:
        raise ArgumentError("restarts must be >= 1")
    best = None
    for attempt in range(restarts):
        candidate = _louvain_once(graph, resolution, seed * restarts + attempt)
        if best is None or candidate.modularity > best.modularity + 1e-12:
            best = candidate
    return best


def _louvain_once(graph: FollowGraph, resolution: float, seed: int) -> CommunityPartition:
    nodes = graph.nodes
    if not nodes:
        raise ArgumentError("graph is empty")
    if graph.total_weight() <= 0:
        raise ArgumentError("graph has no edges; modularity is undefined")

    index = {node: i for i, node in enumerate(nodes)}
    out_adj: list[dict[int, float]] = [dict() for _ in nodes]
    in_adj: list[dict[int, float]] = [dict() for _ in nodes]
    for node in nodes:
        i = index[node]
        for dst, w in graph.out_edges(node).items():
            out_adj[i][index[dst]] = w
            in_adj[index[dst]][i] = w
    level = _Level(out_adj, in_adj)

    rng = random.Random(seed)
    membership = list(range(len(nodes)))  # original node -> current level node
    history: list[float] = []
    for _ in range(100):  # level count is bounded by log reductions in practice
        order = list(range(level.n))
        rng.shuffle(order)
        comm, moved = _local_moves(level, resolution, order)
        n_comms = len(set(comm))
        level, comm = _aggregate(level, comm)
        membership = [comm[membership[i]] for i in range(len(nodes))]
        assignment = {node: membership[index[node]] for node in nodes}
        history.append(directed_modularity(graph, assignment, resolution))
        if not moved or n_comms == 1:
            break

    # renumber communities by first appearance over sorted node order
    final: dict[int, int] = {}
    assignment = {}
    for node in nodes:
        c = membership[index[node]]
        if c not in final:
            final[c] = len(final)
        assignment[node] = final[c]
    return CommunityPartition(
        assignment=assignment,
        modularity=directed_modularity(graph, assignment, resolution),
        level_modularity=history,
    )


@dataclass
class NetworkMetrics:
    node_count: int
    edge_count: int
    avg_weighted_degree: float
    diameter: float
    avg_path_length: float
    unreachable_pairs: int


def network_metrics(graph: FollowGraph) -> NetworkMetrics:
    """All-pairs Dijkstra metrics; unreachable ordered pairs are excluded
    from diameter/path-length and counted separately."""
    nodes = graph.nodes
    if not nodes:
        raise ArgumentError("graph is empty")
    n = len(nodes)
    diameter = 0.0
    total = 0.0
    reachable_pairs = 0
    unreachable = 0
    for src in nodes:
        dist = _dijkstra(graph, src)
        for dst in nodes:
            if dst == src:
                continue
            d = dist.get(dst)
            if d is None:
                unreachable += 1
            else:
                reachable_pairs += 1
                total += d
                diameter = max(diameter, d)
    avg_path = total / reachable_pairs if reachable_pairs else 0.0
    return NetworkMetrics(
        node_count=n,
        edge_count=graph.edge_count,
        avg_weighted_degree=graph.total_weight() / n,
        diameter=diameter,
        avg_path_length=avg_path,
        unreachable_pairs=unreachable,
    )


def _dijkstra(graph: FollowGraph, src: str) -> dict[str, float]:
    dist = {src: 0.0}
    heap = [(0.0, src)]
    done = set()
    while heap:
        d, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        for dst, w in graph.out_edges(node).items():
            nd = d + w
            if dst not in dist or nd < dist[dst]:
                dist[dst] = nd
                heapq.heappush(heap, (nd, dst))
    return dist


def echo_analysis(
    partition: CommunityPartition,
    false_claims: dict[str, set[str]],
) -> dict[int, int]:
    """Users per community that repeat a false-claimed URL someone else in
    the same community also posted.  ``false_claims`` maps user -> URLs."""
    result: dict[int, int] = {}
    for comm, members in partition.members().items():
        url_users: dict[str, int] = {}
        for user in members:
            for url in false_claims.get(user, ()):
                url_users[url] = url_users.get(url, 0) + 1
        echo = 0
        for user in members:
            if any(url_users[url] >= 2 for url in false_claims.get(user, ())):
                echo += 1
        result[comm] = echo
    return result
