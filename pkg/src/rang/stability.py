"""How often the original group structure recurs across a generated ensemble.

Ensemble members become nodes of a meta-graph; two members are joined when
their detected partitions match, either exactly or up to one node per group.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .model import GroupPartition, id_key, sorted_ids

EXACT = "exact"
FLEXIBLE = "flexible"
MODES = (EXACT, FLEXIBLE)
DEFAULT_STABLE_SHARE = 0.1


def canonical_form(part: GroupPartition) -> tuple:
    """Hashable label-free form: groups by (size desc, smallest id asc), members ascending."""
    blocks = [tuple(sorted_ids(g.members)) for g in part.groups if g.members]
    blocks.sort(key=lambda b: (-len(b), id_key(b[0])))
    return tuple(blocks)


def _universe(form) -> set:
    return {u for block in form for u in block}


def _check_universe(a, b):
    if _universe(a) != _universe(b):
        raise ValueError("partitions cover different node sets")


def exact_match(p: GroupPartition, q: GroupPartition) -> bool:
    a, b = canonical_form(p), canonical_form(q)
    _check_universe(a, b)
    return a == b


def _compatible(a: frozenset, b: frozenset) -> bool:
    return len(a - b) <= 1 and len(b - a) <= 1


def _has_perfect_matching(adj: list[list[int]], n: int) -> bool:
    """Kuhn's augmenting-path bipartite matching on an n x n compatibility graph."""
    match_right = [-1] * n

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if match_right[v] == -1 or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    return all(augment(u, set()) for u in range(n))


def _flexible_forms(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    if a == b:
        return True
    sa = [frozenset(x) for x in a]
    sb = [frozenset(x) for x in b]
    adj = [[j for j, y in enumerate(sb) if _compatible(x, y)] for x in sa]
    if any(not row for row in adj):
        return False
    return _has_perfect_matching(adj, len(sa))


def flexible_match(p: GroupPartition, q: GroupPartition) -> bool:
    """True iff the groups can be paired one-to-one so that every pair differs
    by at most one node in each direction. Unequal group counts never match."""
    a, b = canonical_form(p), canonical_form(q)
    _check_universe(a, b)
    return _flexible_forms(a, b)


def _matcher(mode):
    if mode == EXACT:
        return lambda a, b: a == b
    if mode == FLEXIBLE:
        return _flexible_forms
    raise ValueError(f"unknown matching mode {mode!r}; expected exact or flexible")


@dataclass
class MetaGraph:
    size: int
    adjacency: list[frozenset]
    mode: str
    matches_original: list[bool] = field(default_factory=list)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def edges(self):
        for i, nbrs in enumerate(self.adjacency):
            for j in sorted(nbrs):
                if i < j:
                    yield i, j

    def degree_histogram(self) -> list[tuple[int, int]]:
        return sorted(Counter(self.degrees()).items())


def _distinct(forms):
    """Distinct forms in first-seen order, and the members holding each."""
    holders: dict = {}
    for i, f in enumerate(forms):
        holders.setdefault(f, []).append(i)
    return list(holders), holders


def _form_links(distinct, mode):
    """For each distinct form, the distinct forms it matches (itself included)."""
    match = _matcher(mode)
    links = {f: {f} for f in distinct}
    for x in range(len(distinct)):
        for y in range(x + 1, len(distinct)):
            a, b = distinct[x], distinct[y]
            if mode != EXACT and match(a, b):
                links[a].add(b)
                links[b].add(a)
    return links


def build_metagraph(partitions, mode: str = EXACT, original: GroupPartition = None) -> MetaGraph:
    """Meta-graph over ensemble members.

    Matching depends only on the canonical form, so matches are computed once
    per pair of distinct forms and expanded to members.
    """
    _matcher(mode)
    forms = [canonical_form(p) for p in partitions]
    distinct, holders = _distinct(forms)
    links = _form_links(distinct, mode)
    adjacency = []
    for i, f in enumerate(forms):
        nbrs = {j for g in links[f] for j in holders[g]}
        nbrs.discard(i)
        adjacency.append(frozenset(nbrs))
    flags = []
    if original is not None:
        o = canonical_form(original)
        match = _matcher(mode)
        cache = {f: match(f, o) for f in distinct}
        flags = [cache[f] for f in forms]
    return MetaGraph(len(forms), adjacency, mode, flags)


@dataclass(frozen=True)
class CensusEntry:
    structure: tuple
    count: int  # members with exactly this structure
    frequency: int  # exact: same as count; flexible: closed neighborhood size


def structure_census(partitions, mode: str = EXACT) -> list[CensusEntry]:
    """One entry per distinct structure, most frequent first."""
    forms = [canonical_form(p) for p in partitions]
    distinct, holders = _distinct(forms)
    links = _form_links(distinct, mode)
    entries = [
        CensusEntry(f, len(holders[f]), sum(len(holders[g]) for g in links[f]))
        for f in distinct
    ]
    entries.sort(key=lambda e: (-e.frequency, -e.count, [[id_key(u) for u in b] for b in e.structure]))
    return entries


def original_frequency(census: list[CensusEntry], original: GroupPartition, mode: str = EXACT) -> int:
    """Members whose structure matches the original under ``mode``."""
    o = canonical_form(original)
    match = _matcher(mode)
    return sum(e.count for e in census if match(e.structure, o))


@dataclass
class StabilityVerdict:
    mode: str
    size: int
    original_count: int
    top_frequencies: list[int]
    threshold: float

    @property
    def original_share(self) -> float:
        return self.original_count / self.size if self.size else 0.0

    @property
    def stable(self) -> bool:
        return self.original_share >= self.threshold

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "ensemble_size": self.size,
            "original_count": self.original_count,
            "original_share": self.original_share,
            "threshold": self.threshold,
            "stable": self.stable,
            "top_frequencies": self.top_frequencies,
        }


def stability_verdict(
    census: list[CensusEntry],
    original: GroupPartition,
    size: int,
    mode: str = EXACT,
    threshold: float = DEFAULT_STABLE_SHARE,
) -> StabilityVerdict:
    if size < 1:
        raise ValueError("ensemble size must be at least 1")
    top = [e.frequency for e in census[:10]]
    return StabilityVerdict(mode, size, original_frequency(census, original, mode), top, threshold)


def census_to_json(census: list[CensusEntry], verdict: StabilityVerdict = None) -> str:
    data = {
        "structures": [
            {"frequency": e.frequency, "count": e.count, "groups": [list(b) for b in e.structure]}
            for e in census
        ]
    }
    if verdict is not None:
        data["verdict"] = verdict.to_dict()
    return json.dumps(data, indent=2) + "\n"


def degrees_to_csv(meta: MetaGraph) -> str:
    lines = ["degree,count"] + [f"{d},{c}" for d, c in meta.degree_histogram()]
    return "\n".join(lines) + "\n"
