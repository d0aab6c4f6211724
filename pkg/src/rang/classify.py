"""Edge classification and the per-class (E, W) summary of a network.

Every ordered node pair falls into exactly one class. The six group kinds
come from the organizational model; anything they leave out (boss edges,
manager-to-manager edges, edges touching unassigned nodes) goes to a
residual class keyed by the ordered pair of endpoint roles.
"""

from __future__ import annotations

import json
from collections import defaultdict
from pathlib import Path
from typing import Iterator

from .model import (
    GROUP_TO_LEADER,
    INTER,
    INTRA,
    LEADER_TO_GROUP,
    LEADER_TO_OUTSIDE,
    OUTSIDE_TO_LEADER,
    RESIDUAL,
    ClassKey,
    Edge,
    EdgeClass,
    EdgeClassSummary,
    Group,
    GroupPartition,
    Network,
    NodeRecord,
    id_key,
    inter_capacity,
    intra_capacity,
    leader_capacity,
    sorted_ids,
)

ROLE_MEMBER = "member"
ROLE_LEADER = "leader"

DEFAULT_INDEPENDENT_CAP = 6


class Roles:
    """Lookup tables for classifying ordered pairs of a network + partition."""

    def __init__(self, nodes, part: GroupPartition):
        self.part = part
        self.levels = {n.id: n.level for n in nodes}
        self.group_of = part.membership()
        self.led_by = part.leaders()  # leader id -> gid
        self.leader_of = {g.gid: g.leader for g in part.groups}
        self.members = {g.gid: sorted_ids(g.members) for g in part.groups}
        self.all_members = sorted_ids(self.group_of)
        self.ids = sorted_ids(self.levels)
        by_role = defaultdict(list)
        for node_id in self.ids:
            by_role[self.role(node_id)].append(node_id)
        self.by_role = dict(by_role)

    def role(self, node_id) -> str:
        if node_id in self.group_of:
            return ROLE_MEMBER
        if node_id in self.led_by:
            return ROLE_LEADER
        return f"level{self.levels[node_id]}"

    def classify(self, source, target) -> ClassKey:
        gs = self.group_of.get(source)
        gt = self.group_of.get(target)
        if gs is not None and gt is not None:
            return ClassKey(INTRA, gs) if gs == gt else ClassKey(INTER, gs, gt)
        ls = self.led_by.get(source)
        lt = self.led_by.get(target)
        if ls is not None and gt is not None:
            return ClassKey(LEADER_TO_GROUP, ls) if ls == gt else ClassKey(LEADER_TO_OUTSIDE, ls)
        if gs is not None and lt is not None:
            return ClassKey(GROUP_TO_LEADER, lt) if gs == lt else ClassKey(OUTSIDE_TO_LEADER, lt)
        return ClassKey(RESIDUAL, self.role(source), self.role(target))

    def outside(self, gid) -> list:
        """Member-level nodes of every other group."""
        return [m for m in self.all_members if self.group_of[m] != gid]

    def keys(self) -> list[ClassKey]:
        """Every group class key, in a fixed order."""
        gids = [g.gid for g in self.part.canonical().groups]
        keys = [ClassKey(INTRA, i) for i in gids]
        keys += [ClassKey(INTER, i, j) for i in gids for j in gids if i != j]
        for i in gids:
            if self.leader_of[i] is not None:
                keys += [
                    ClassKey(LEADER_TO_GROUP, i),
                    ClassKey(GROUP_TO_LEADER, i),
                    ClassKey(LEADER_TO_OUTSIDE, i),
                    ClassKey(OUTSIDE_TO_LEADER, i),
                ]
        return keys

    def residual_keys(self) -> list[ClassKey]:
        roles = sorted(self.by_role)
        keys = []
        for ra in roles:
            for rb in roles:
                if ra == ROLE_MEMBER and rb in (ROLE_MEMBER, ROLE_LEADER):
                    continue
                if ra == ROLE_LEADER and rb == ROLE_MEMBER:
                    continue
                key = ClassKey(RESIDUAL, ra, rb)
                if self.capacity(key):
                    keys.append(key)
        return keys

    def capacity(self, key: ClassKey) -> int:
        kind = key.kind
        if kind == INTRA:
            return intra_capacity(len(self.members[key.a]))
        if kind == INTER:
            return inter_capacity(len(self.members[key.a]), len(self.members[key.b]))
        if kind in (LEADER_TO_GROUP, GROUP_TO_LEADER):
            return leader_capacity(len(self.members[key.a]))
        if kind in (LEADER_TO_OUTSIDE, OUTSIDE_TO_LEADER):
            return len(self.all_members) - len(self.members[key.a])
        na = len(self.by_role.get(key.a, ()))
        nb = len(self.by_role.get(key.b, ()))
        return na * nb - (na if key.a == key.b else 0)

    def pairs(self, key: ClassKey) -> Iterator[tuple]:
        """Enumerate the ordered pairs of a class in a fixed order."""
        kind = key.kind
        if kind == INTRA:
            ms = self.members[key.a]
            return ((u, v) for u in ms for v in ms if u != v)
        if kind == INTER:
            return ((u, v) for u in self.members[key.a] for v in self.members[key.b])
        leader = self.leader_of.get(key.a)
        if kind == LEADER_TO_GROUP:
            return ((leader, v) for v in self.members[key.a])
        if kind == GROUP_TO_LEADER:
            return ((u, leader) for u in self.members[key.a])
        if kind == LEADER_TO_OUTSIDE:
            return ((leader, v) for v in self.outside(key.a))
        if kind == OUTSIDE_TO_LEADER:
            return ((u, leader) for u in self.outside(key.a))
        ra = self.by_role.get(key.a, [])
        rb = self.by_role.get(key.b, [])
        return ((u, v) for u in ra for v in rb if u != v)


def classify_edge(edge: Edge, part: GroupPartition, nodes) -> ClassKey:
    """Class of a single edge. ``nodes`` is the network's node records."""
    return Roles(nodes, part).classify(edge.source, edge.target)


def summarize(net: Network, part: GroupPartition) -> EdgeClassSummary:
    """Census of every edge into its class, with closed-form capacities.

    Original weights are kept per class (heaviest first) for the
    weight-preserving generator.
    """
    known = set(net.node_ids)
    for g in part.groups:
        missing = [m for m in g.members if m not in known]
        if g.leader is not None and g.leader not in known:
            missing.append(g.leader)
        if missing:
            raise ValueError(f"group {g.gid} references nodes absent from the network: {sorted_ids(missing)}")
    roles = Roles(net.nodes, part)
    weights = defaultdict(list)
    for e in net.edges:
        weights[roles.classify(e.source, e.target)].append(e.weight)

    def build(key):
        ws = tuple(sorted(weights.pop(key, ()), reverse=True))
        return EdgeClass(key, roles.capacity(key), sum(ws), ws)

    classes = tuple(build(k) for k in roles.keys())
    residual = tuple(build(k) for k in roles.residual_keys())
    if weights:
        raise AssertionError(f"unclassified edges in {sorted(weights)}")
    flags = tuple(g.gid for g in part.canonical().groups if g.independent)
    return EdgeClassSummary(net.canonical().nodes, part.canonical(), classes, residual, flags)


def reciprocity(net: Network, members) -> float:
    """Fraction of edges touching ``members`` whose reverse edge also exists."""
    members = set(members)
    pairs = {(e.source, e.target) for e in net.edges}
    touching = [p for p in pairs if p[0] in members or p[1] in members]
    if not touching:
        return 0.0
    return sum((v, u) in pairs for u, v in touching) / len(touching)


def detect_independent(part: GroupPartition, net: Network, size_cap: int = DEFAULT_INDEPENDENT_CAP) -> list:
    """Gids of groups that look independent of the management hierarchy.

    A leaderless group of at most ``size_cap`` members whose members receive no
    edge from outside the group is flagged. Groups already marked independent
    are always returned.
    """
    incoming_from_outside = defaultdict(bool)
    group_of = part.membership()
    for e in net.edges:
        g = group_of.get(e.target)
        if g is not None and group_of.get(e.source) != g:
            incoming_from_outside[g] = True
    flagged = []
    for g in part.canonical().groups:
        if g.independent:
            flagged.append(g.gid)
        elif g.leader is None and len(g.members) <= size_cap and not incoming_from_outside[g.gid]:
            flagged.append(g.gid)
    return flagged


def mark_independent(part: GroupPartition, gids) -> GroupPartition:
    gids = set(gids)
    return GroupPartition(
        tuple(
            Group(g.gid, g.members, g.leader, g.independent or (g.gid in gids and g.leader is None))
            for g in part.groups
        )
    )


# summary.json


def _key_to_json(key: ClassKey) -> dict:
    out = {"kind": key.kind}
    if key.kind == RESIDUAL:
        out["source_role"], out["target_role"] = key.a, key.b
    elif key.kind == INTER:
        out["source_group"], out["target_group"] = key.a, key.b
    else:
        out["group"] = key.a
    return out


def _key_from_json(d: dict) -> ClassKey:
    kind = d["kind"]
    if kind == RESIDUAL:
        return ClassKey(kind, d["source_role"], d["target_role"])
    if kind == INTER:
        return ClassKey(kind, d["source_group"], d["target_group"])
    return ClassKey(kind, d["group"])


def summary_to_dict(summary: EdgeClassSummary) -> dict:
    def cls(c: EdgeClass):
        return {**_key_to_json(c.key), "E": c.capacity, "W": c.weight_sum, "weights": list(c.weights)}

    roster = summary.roster
    return {
        "node_count": summary.node_count,
        "roster": {str(lvl): ids for lvl, ids in roster.items()},
        "groups": [
            {
                "gid": g.gid,
                "size": len(g.members),
                "members": sorted_ids(g.members),
                "leader": g.leader,
                "independent": g.independent,
            }
            for g in summary.partition.groups
        ],
        "total_weight": summary.total_weight,
        "residual_weight": summary.residual_weight,
        "classes": [cls(c) for c in summary.classes],
        "residual": [cls(c) for c in summary.residual],
    }


def summary_from_dict(data: dict) -> EdgeClassSummary:
    nodes = [NodeRecord(i, int(lvl)) for lvl, ids in data["roster"].items() for i in ids]
    nodes.sort(key=lambda n: id_key(n.id))
    part = GroupPartition(
        tuple(Group(g["gid"], frozenset(g["members"]), g["leader"], g["independent"]) for g in data["groups"])
    )

    def cls(d):
        return EdgeClass(_key_from_json(d), d["E"], d["W"], tuple(d["weights"]))

    return EdgeClassSummary(
        tuple(nodes),
        part.canonical(),
        tuple(cls(d) for d in data["classes"]),
        tuple(cls(d) for d in data["residual"]),
        tuple(g.gid for g in part.groups if g.independent),
    )


def write_summary(summary: EdgeClassSummary, path) -> None:
    Path(path).write_text(json.dumps(summary_to_dict(summary), indent=2) + "\n", encoding="utf-8")


def read_summary(path) -> EdgeClassSummary:
    return summary_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def summary_roles(summary: EdgeClassSummary) -> Roles:
    return Roles(summary.nodes, summary.partition)

