"""Core value types: networks with hierarchy levels, group partitions and
the per-class edge statistics that summarize a network for sharing."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Union

NodeId = Union[int, str]

MEMBER, MANAGER, BOSS = 1, 2, 3
LEVELS = (MEMBER, MANAGER, BOSS)


def id_key(node_id: NodeId):
    """Sort key that orders numeric ids before any non-numeric ones."""
    return (1, node_id) if isinstance(node_id, str) else (0, node_id)


def sorted_ids(ids: Iterable[NodeId]) -> list:
    return sorted(ids, key=id_key)


@dataclass(frozen=True)
class NodeRecord:
    id: NodeId
    level: int = MEMBER


@dataclass(frozen=True)
class Edge:
    source: NodeId
    target: NodeId
    weight: int


@dataclass(frozen=True)
class Network:
    nodes: tuple[NodeRecord, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def node_ids(self) -> list:
        return [n.id for n in self.nodes]

    @property
    def total_weight(self) -> int:
        return sum(e.weight for e in self.edges)

    def levels(self) -> dict:
        return {n.id: n.level for n in self.nodes}

    def weights(self) -> dict:
        """Map ``(source, target) -> weight``."""
        return {(e.source, e.target): e.weight for e in self.edges}

    def roster(self) -> dict[int, list]:
        """Node ids per hierarchy level, ascending."""
        out: dict[int, list] = {}
        for n in self.nodes:
            out.setdefault(n.level, []).append(n.id)
        return {lvl: sorted_ids(ids) for lvl, ids in sorted(out.items())}

    def canonical(self) -> "Network":
        nodes = sorted(self.nodes, key=lambda n: id_key(n.id))
        edges = sorted(self.edges, key=lambda e: (id_key(e.source), id_key(e.target)))
        return Network(tuple(nodes), tuple(edges))

    @classmethod
    def from_weights(cls, nodes: Iterable[NodeRecord], weights: dict) -> "Network":
        """Build a canonical network from ``{(u, v): w}``; zero weights are dropped."""
        edges = [Edge(u, v, int(w)) for (u, v), w in weights.items() if w > 0]
        return cls(tuple(nodes), tuple(edges)).canonical()


@dataclass(frozen=True)
class Group:
    gid: int
    members: frozenset
    leader: Optional[NodeId] = None
    independent: bool = False

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))


@dataclass(frozen=True)
class GroupPartition:
    groups: tuple[Group, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))

    def __len__(self):
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)

    def by_gid(self) -> dict:
        return {g.gid: g for g in self.groups}

    def membership(self) -> dict:
        """Map node id -> gid for group members (leaders excluded)."""
        return {m: g.gid for g in self.groups for m in g.members}

    def leaders(self) -> dict:
        """Map leader id -> gid of the group it leads."""
        return {g.leader: g.gid for g in self.groups if g.leader is not None}

    def node_set(self) -> set:
        return {m for g in self.groups for m in g.members}

    def canonical(self) -> "GroupPartition":
        return GroupPartition(tuple(sorted(self.groups, key=lambda g: g.gid)))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[NodeId]]) -> "GroupPartition":
        """Leaderless partition with gids assigned by smallest member."""
        blocks = [frozenset(b) for b in blocks if b]
        blocks.sort(key=lambda b: id_key(min(b, key=id_key)))
        return cls(tuple(Group(i, b) for i, b in enumerate(blocks)))


class Violation(NamedTuple):
    rule: str
    element: object

    def __str__(self):
        return f"{self.rule}: {self.element!r}"


def validate_network(net: Network) -> list[Violation]:
    """Return every broken invariant of ``net``; an empty list means valid."""
    out: list[Violation] = []
    counts = Counter(n.id for n in net.nodes)
    for node_id, c in counts.items():
        if c > 1:
            out.append(Violation("duplicate node id", node_id))
    for n in net.nodes:
        if isinstance(n.level, bool) or not isinstance(n.level, int) or n.level not in LEVELS:
            out.append(Violation("hierarchy level not in {1,2,3}", n))
    ids = set(counts)
    seen = set()
    for e in net.edges:
        if e.source == e.target:
            out.append(Violation("self-loop", e))
        pair = (e.source, e.target)
        if pair in seen:
            out.append(Violation("duplicate edge", pair))
        seen.add(pair)
        for end in pair:
            if end not in ids:
                out.append(Violation("edge endpoint not in nodes", (e, end)))
        w = e.weight
        if isinstance(w, bool) or not isinstance(w, int):
            if isinstance(w, float) and math.isfinite(w) and w.is_integer():
                pass
            else:
                out.append(Violation("non-integer weight", e))
                continue
        if w < 1:
            out.append(Violation("weight below 1", e))
    return out


def validate_partition(net: Network, part: GroupPartition) -> tuple[list[Violation], list[str]]:
    """Check a group partition against its network.

    Returns ``(violations, warnings)``. Incomplete coverage is only a warning:
    community detection often leaves low-degree nodes unassigned.
    """
    out: list[Violation] = []
    warnings: list[str] = []
    levels = net.levels()
    gids = Counter(g.gid for g in part.groups)
    for gid, c in gids.items():
        if c > 1:
            out.append(Violation("duplicate group id", gid))
    owner: dict = {}
    led: dict = {}
    for g in part.groups:
        if not g.members:
            out.append(Violation("empty group", g.gid))
        for m in sorted_ids(g.members):
            if m not in levels:
                out.append(Violation("group member not in nodes", (g.gid, m)))
            elif levels[m] != MEMBER:
                out.append(Violation("group member not at member level", (g.gid, m)))
            if m in owner:
                out.append(Violation("node in more than one group", (m, owner[m], g.gid)))
            owner.setdefault(m, g.gid)
        if g.leader is not None:
            if g.independent:
                out.append(Violation("independent group has a leader", g.gid))
            if g.leader in g.members:
                out.append(Violation("leader is a member of its own group", (g.gid, g.leader)))
            if g.leader not in levels:
                out.append(Violation("leader not in nodes", (g.gid, g.leader)))
            elif levels[g.leader] < MANAGER:
                out.append(Violation("leader below manager level", (g.gid, g.leader)))
            if g.leader in led:
                out.append(Violation("node leads more than one group", (g.leader, led[g.leader], g.gid)))
            led.setdefault(g.leader, g.gid)
    for node_id in set(led) & set(owner):
        out.append(Violation("leader is also a group member", node_id))
    covered = set(owner) | set(led)
    missing = [n.id for n in net.nodes if n.id not in covered and n.level != BOSS]
    if missing:
        warnings.append(f"{len(missing)} node(s) not assigned to any group: {sorted_ids(missing)[:10]}")
    return out, warnings


# Edge-class kinds. Residual classes carry endpoint roles instead of gids.
INTRA = "intra"
INTER = "inter"
LEADER_TO_GROUP = "leader_to_group"
GROUP_TO_LEADER = "group_to_leader"
LEADER_TO_OUTSIDE = "leader_to_outside"
OUTSIDE_TO_LEADER = "outside_to_leader"
RESIDUAL = "residual"
KINDS = (INTRA, INTER, LEADER_TO_GROUP, GROUP_TO_LEADER, LEADER_TO_OUTSIDE, OUTSIDE_TO_LEADER, RESIDUAL)


class ClassKey(NamedTuple):
    """Identifies an edge class.

    ``a``/``b`` are gids for the group kinds (``b`` only for ``inter``) and
    endpoint role names for ``residual``.
    """

    kind: str
    a: object = None
    b: object = None

    def label(self) -> str:
        if self.kind == INTER or self.kind == RESIDUAL:
            return f"{self.kind}({self.a},{self.b})"
        return f"{self.kind}({self.a})"


@dataclass(frozen=True)
class EdgeClass:
    key: ClassKey
    capacity: int
    weight_sum: int = 0
    # original edge weights, heaviest first
    weights: tuple[int, ...] = ()

    @property
    def edge_count(self) -> int:
        return len(self.weights)


def intra_capacity(size: int) -> int:
    return size * (size - 1)


def inter_capacity(size_i: int, size_j: int) -> int:
    return size_i * size_j


def leader_capacity(size: int) -> int:
    return size


@dataclass(frozen=True)
class EdgeClassSummary:
    """Shareable statistics of a network: one (E, W) record per edge class.

    Group membership and the level roster are carried along because the
    generators reproduce them verbatim.
    """

    nodes: tuple[NodeRecord, ...]
    partition: GroupPartition
    classes: tuple[EdgeClass, ...]
    residual: tuple[EdgeClass, ...] = ()
    independent_flags: tuple = field(default=())

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def group_sizes(self) -> dict:
        return {g.gid: len(g.members) for g in self.partition.groups}

    @property
    def roster(self) -> dict[int, list]:
        return Network(self.nodes).roster()

    @property
    def residual_weight(self) -> int:
        return sum(c.weight_sum for c in self.residual)

    @property
    def total_weight(self) -> int:
        return sum(c.weight_sum for c in self.classes) + self.residual_weight

    def all_classes(self) -> tuple[EdgeClass, ...]:
        return self.classes + self.residual

    def get(self, key: ClassKey) -> EdgeClass:
        for c in self.all_classes():
            if c.key == key:
                return c
        raise KeyError(key)
