"""Similarity of generated networks to the original: group NMI, leadership
Jaccard and their product."""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from collections import Counter
from dataclasses import dataclass, field

from .model import Group, GroupPartition, sorted_ids


def complete(part: GroupPartition, universe) -> GroupPartition:
    """Add every node of ``universe`` missing from ``part`` as a singleton group."""
    covered = part.node_set()
    extra = [u for u in sorted_ids(universe) if u not in covered]
    if not extra:
        return part
    next_gid = max((g.gid for g in part.groups), default=-1) + 1
    blocks = GroupPartition.from_blocks([[u] for u in extra])
    return GroupPartition(
        part.groups + tuple(Group(next_gid + i, g.members) for i, g in enumerate(blocks.groups))
    )


def _labels(part: GroupPartition) -> dict:
    return part.membership()


def _entropy(counts, n) -> float:
    return -sum(c / n * math.log(c / n) for c in counts if c)


def nmi(p: GroupPartition, q: GroupPartition) -> float:
    """Normalized mutual information, ``2 I(P;Q) / (H(P) + H(Q))``.

    Two single-block partitions score 1.
    """
    lp, lq = _labels(p), _labels(q)
    if set(lp) != set(lq):
        raise ValueError("partitions cover different node sets")
    n = len(lp)
    if n == 0:
        return 1.0
    cp = Counter(lp.values())
    cq = Counter(lq.values())
    joint = Counter((lp[u], lq[u]) for u in lp)
    hp, hq = _entropy(cp.values(), n), _entropy(cq.values(), n)
    if hp + hq == 0 or len(joint) == len(cp) == len(cq):
        # identical up to relabeling; skip the rounding of the log sums
        return 1.0
    mi = sum(c / n * math.log(c * n / (cp[a] * cq[b])) for (a, b), c in joint.items())
    return min(1.0, max(0.0, 2.0 * mi / (hp + hq)))


def jaccard_leadership(a, b) -> float:
    a, b = set(a), set(b)
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def combined_score(nmi_value: float, jaccard_value: float) -> float:
    return nmi_value * jaccard_value


def aggregate(values) -> dict:
    """mean, lower median, min and max."""
    values = list(values)
    return {
        "mean": statistics.fmean(values),
        "median": statistics.median_low(values),
        "min": min(values),
        "max": max(values),
    }


@dataclass
class NetworkScore:
    index: int
    nmi: float
    jaccard: float
    leaders: list = field(default_factory=list)
    groups: int = 0

    @property
    def combined(self) -> float:
        return combined_score(self.nmi, self.jaccard)


@dataclass
class EnsembleReport:
    rows: list[NetworkScore]
    original_leaders: list
    m: int

    def aggregates(self) -> dict:
        return {
            "nmi": aggregate(r.nmi for r in self.rows),
            "jaccard": aggregate(r.jaccard for r in self.rows),
            "combined": aggregate(r.combined for r in self.rows),
        }

    def summary_table(self) -> dict:
        """Headline row: median group NMI, mean leadership Jaccard, their product."""
        agg = self.aggregates()
        med, jac = agg["nmi"]["median"], agg["jaccard"]["mean"]
        return {"group_nmi_median": med, "jaccard_leadership": jac, "combined_score": combined_score(med, jac)}

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "original_leaders": self.original_leaders,
            "count": len(self.rows),
            "aggregates": self.aggregates(),
            "table": self.summary_table(),
            "networks": [
                {
                    "index": r.index,
                    "nmi": r.nmi,
                    "jaccard": r.jaccard,
                    "combined": r.combined,
                    "groups": r.groups,
                    "leaders": r.leaders,
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "nmi", "jaccard", "combined"])
        for r in self.rows:
            w.writerow([r.index, repr(r.nmi), repr(r.jaccard), repr(r.combined)])
        agg = self.aggregates()
        for stat in ("mean", "median", "min", "max"):
            w.writerow([stat] + [repr(agg[k][stat]) for k in ("nmi", "jaccard", "combined")])
        return buf.getvalue()


def ensemble_report(detected, original_part: GroupPartition, original_leaders, universe, m: int) -> EnsembleReport:
    """Score each generated network against the original.

    ``detected`` is a sequence of ``(partition, leader_set)`` per generated
    network, in ensemble order. Unassigned nodes count as singleton groups.
    """
    detected = list(detected)
    if not detected:
        raise ValueError("empty ensemble")
    ref = complete(original_part, universe)
    rows = []
    for k, (part, leaders) in enumerate(detected):
        rows.append(
            NetworkScore(
                k,
                nmi(complete(part, universe), ref),
                jaccard_leadership(leaders, original_leaders),
                sorted_ids(leaders),
                len(part),
            )
        )
    return EnsembleReport(rows, sorted_ids(original_leaders), m)
