"""Betweenness centrality (Brandes) and betweenness-based leader detection.

Weighted shortest paths use length ``1 / weight``: frequent interaction means
a short hop. Lengths are scaled by the lcm of all weights so path lengths
are exact integers and ties between shortest paths are detected exactly.
"""

from __future__ import annotations

import heapq
import math
from collections import deque

from .community import UndirectedGraph
from .model import id_key

WEIGHTED = "inverse"
UNIT = "unit"
LEADER_THRESHOLD = 0.9


def _integer_lengths(graph: UndirectedGraph) -> dict:
    weights = {w for u in graph.nodes for w in graph.adj[u].values()}
    if any(not float(w).is_integer() or w <= 0 for w in weights):
        raise ValueError("weighted betweenness needs positive integer weights")
    scale = math.lcm(*(int(w) for w in weights)) if weights else 1
    return {u: {v: scale // int(w) for v, w in graph.adj[u].items()} for u in graph.nodes}


def _sssp_unit(graph, s):
    order, preds = [], {s: []}
    sigma = {s: 1}
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in graph.adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
                sigma[w], preds[w] = 0, []
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def _sssp_weighted(lengths, s):
    order, preds = [], {s: []}
    sigma = {s: 1}
    dist = {}
    seen = {s: 0}
    heap = [(0, 0, s)]
    counter = 1
    while heap:
        d, _, v = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        order.append(v)
        for w, length in lengths[v].items():
            nd = d + length
            if w in dist:
                continue
            if w not in seen or nd < seen[w]:
                seen[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (nd, counter, w))
                counter += 1
            elif nd == seen[w]:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def betweenness(graph: UndirectedGraph, mode: str = WEIGHTED) -> dict:
    """Raw betweenness: for each node, the sum over unordered pairs {s, t} of
    the fraction of shortest s-t paths passing through it."""
    if mode not in (WEIGHTED, UNIT):
        raise ValueError(f"unknown path-length mode {mode!r}")
    score = {u: 0.0 for u in graph.nodes}
    lengths = _integer_lengths(graph) if mode == WEIGHTED else None
    for s in graph.nodes:
        if mode == WEIGHTED:
            order, preds, sigma = _sssp_weighted(lengths, s)
        else:
            order, preds, sigma = _sssp_unit(graph, s)
        delta = dict.fromkeys(order, 0.0)
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                score[w] += delta[w]
    # every unordered pair was counted from both ends
    return {u: b / 2.0 for u, b in score.items()}


def relative_betweenness(graph: UndirectedGraph, mode: str = WEIGHTED) -> dict:
    """Betweenness divided by the number of pairs excluding the node, in [0, 1]."""
    n = len(graph.nodes)
    if n < 3:
        return {u: 0.0 for u in graph.nodes}
    norm = (n - 1) * (n - 2) / 2.0
    return {u: b / norm for u, b in betweenness(graph, mode).items()}


def rank(scores: dict) -> list:
    """Node ids ordered by score descending, ties by id ascending."""
    return sorted(scores, key=lambda u: (-scores[u], id_key(u)))


def leader_threshold(scores: dict, m: int) -> float:
    if m < 1:
        raise ValueError("the number of management nodes must be at least 1")
    if m > len(scores):
        raise ValueError(f"{m} management nodes requested but the graph has {len(scores)} nodes")
    return LEADER_THRESHOLD * scores[rank(scores)[m - 1]]


def detect_leaders(graph: UndirectedGraph, m: int, mode: str = WEIGHTED, scores: dict = None) -> set:
    """Nodes whose relative betweenness reaches 90% of the m-th highest value."""
    if scores is None:
        scores = relative_betweenness(graph, mode)
    t = leader_threshold(scores, m)
    return {u for u, s in scores.items() if s >= t}


def centrality_rows(graph: UndirectedGraph, mode: str = WEIGHTED) -> list[tuple]:
    """``(id, raw, relative, rank)`` rows ordered by rank."""
    raw = betweenness(graph, mode)
    n = len(graph.nodes)
    norm = (n - 1) * (n - 2) / 2.0 if n >= 3 else None
    rel = {u: (b / norm if norm else 0.0) for u, b in raw.items()}
    return [(u, raw[u], rel[u], i + 1) for i, u in enumerate(rank(rel))]
