"""Louvain community detection on the undirected view of a network."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import GroupPartition, Network, sorted_ids

_GAIN_EPS = 1e-12


@dataclass
class UndirectedGraph:
    """Weighted undirected graph; ``adj[u][v] == adj[v][u]``, no self-loops."""

    nodes: list = field(default_factory=list)
    adj: dict = field(default_factory=dict)

    def add_edge(self, u, v, w):
        self.adj[u][v] = self.adj[u].get(v, 0) + w
        self.adj[v][u] = self.adj[v].get(u, 0) + w

    def edges(self):
        """Each undirected edge once, as ``(u, v, w)`` with ``u`` first in id order."""
        order = {u: i for i, u in enumerate(self.nodes)}
        for u in self.nodes:
            for v, w in self.adj[u].items():
                if order[u] < order[v]:
                    yield u, v, w

    @property
    def total_weight(self):
        return sum(w for _, _, w in self.edges())

    def degree(self, u):
        return sum(self.adj[u].values())

    @classmethod
    def from_edges(cls, nodes, edges) -> "UndirectedGraph":
        g = cls(sorted_ids(nodes), {})
        g.adj = {u: {} for u in g.nodes}
        for u, v, w in edges:
            g.add_edge(u, v, w)
        return g


def to_undirected(net: Network) -> UndirectedGraph:
    """Collapse directed edges; opposing edges have their weights summed."""
    return UndirectedGraph.from_edges(net.node_ids, ((e.source, e.target, e.weight) for e in net.edges))


def modularity(graph: UndirectedGraph, partition: GroupPartition, resolution: float = 1.0) -> float:
    """Newman modularity of a partition covering every node of ``graph``."""
    m = graph.total_weight
    if m == 0:
        return 0.0
    comm = partition.membership()
    missing = [u for u in graph.nodes if u not in comm]
    if missing:
        raise ValueError(f"partition does not cover nodes {missing[:5]}")
    internal: dict = {}
    degree: dict = {}
    for u in graph.nodes:
        degree[comm[u]] = degree.get(comm[u], 0) + graph.degree(u)
    for u, v, w in graph.edges():
        if comm[u] == comm[v]:
            internal[comm[u]] = internal.get(comm[u], 0) + w
    return sum(internal.get(c, 0) / m - resolution * (d / (2 * m)) ** 2 for c, d in degree.items())


class _Level:
    """One aggregation level: integer nodes with neighbor lists and self-loops."""

    def __init__(self, n, nbrs, loops):
        self.n = n
        self.nbrs = nbrs  # list of dict {v: w}, v != u
        self.loops = loops  # internal weight collapsed into each node
        self.k = [sum(nb.values()) + 2 * lp for nb, lp in zip(nbrs, loops)]


def _one_level(level: _Level, m: float, order, resolution: float, on_pass=None):
    """Local moving phase. Returns community id per node and whether anything moved."""
    comm = list(range(level.n))
    tot = list(level.k)
    moved_any = False
    two_m = 2.0 * m
    while True:
        moved = False
        for u in order:
            cu = comm[u]
            ku = level.k[u]
            links: dict = {}
            for v, w in level.nbrs[u].items():
                links[comm[v]] = links.get(comm[v], 0.0) + w
            tot[cu] -= ku
            best_c = cu
            best_gain = links.get(cu, 0.0) - resolution * tot[cu] * ku / two_m
            for c in sorted(links):
                if c == cu:
                    continue
                gain = links[c] - resolution * tot[c] * ku / two_m
                if gain > best_gain + _GAIN_EPS:
                    best_c, best_gain = c, gain
            tot[best_c] += ku
            if best_c != cu:
                comm[u] = best_c
                moved = moved_any = True
        if on_pass is not None:
            on_pass(comm)
        if not moved:
            return comm, moved_any


def _aggregate(level: _Level, comm):
    labels = sorted(set(comm))
    remap = {c: i for i, c in enumerate(labels)}
    n = len(labels)
    nbrs = [dict() for _ in range(n)]
    loops = [0.0] * n
    for u in range(level.n):
        cu = remap[comm[u]]
        loops[cu] += level.loops[u]
        for v, w in level.nbrs[u].items():
            cv = remap[comm[v]]
            if cu == cv:
                # each internal edge is seen from both ends
                loops[cu] += w / 2.0
            else:
                nbrs[cu][cv] = nbrs[cu].get(cv, 0.0) + w
    return _Level(n, nbrs, loops), [remap[c] for c in comm]


def louvain(
    graph: UndirectedGraph,
    rng: Optional[np.random.Generator] = None,
    resolution: float = 1.0,
    on_pass=None,
) -> GroupPartition:
    """Greedy modularity maximization by local moving and aggregation.

    Nodes are visited in ascending id order unless ``rng`` is given, in which
    case each level visits them in a shuffled order. On equal gains the lowest
    community id wins; a node only leaves its community for a strictly better
    one. ``on_pass`` is called with the node-level partition after every local
    moving pass.
    """
    ids = list(graph.nodes)
    if not ids:
        return GroupPartition(())
    index = {u: i for i, u in enumerate(ids)}
    nbrs = [{index[v]: float(w) for v, w in graph.adj[u].items() if v != u} for u in ids]
    level = _Level(len(ids), nbrs, [0.0] * len(ids))
    m = graph.total_weight
    assignment = list(range(len(ids)))
    if m == 0:
        return GroupPartition.from_blocks([[u] for u in ids])

    def report(comm):
        if on_pass is not None:
            on_pass(_blocks(ids, [comm[a] for a in assignment]))

    while True:
        order = list(range(level.n))
        if rng is not None:
            order = rng.permutation(level.n).tolist()
        comm, moved = _one_level(level, m, order, resolution, report)
        if not moved:
            break
        level, remap = _aggregate(level, comm)
        assignment = [remap[a] for a in assignment]
        if level.n == 1:
            break
    return _blocks(ids, assignment)


def _blocks(ids, labels) -> GroupPartition:
    groups: dict = {}
    for u, c in zip(ids, labels):
        groups.setdefault(c, []).append(u)
    return GroupPartition.from_blocks(groups.values())


def detect_groups(net: Network, rng: Optional[np.random.Generator] = None) -> GroupPartition:
    return louvain(to_undirected(net), rng)
