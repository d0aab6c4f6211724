import numpy as np
import pytest

from rang.model import Group, GroupPartition, Network, NodeRecord


def make_org(seed=0, sizes=(5, 4, 6), p_in=0.6, p_out=0.05, p_lead=0.8, independent=(), max_w=6):
    """Small three-level organization: boss 1, one manager per non-independent
    group, members numbered after the managers. Members of independent groups
    only send edges."""
    rng = np.random.default_rng(seed)
    nodes = [NodeRecord(1, 3)]
    next_id = 2
    manager = {}
    for g in range(len(sizes)):
        if g not in independent:
            manager[g] = next_id
            nodes.append(NodeRecord(next_id, 2))
            next_id += 1
    groups, group_of = [], {}
    for g, size in enumerate(sizes):
        ms = list(range(next_id, next_id + size))
        next_id += size
        group_of.update((m, g) for m in ms)
        nodes += [NodeRecord(m, 1) for m in ms]
        groups.append(Group(g, frozenset(ms), manager.get(g), g in independent))
    leads = {m: g for g, m in manager.items()}

    def prob(u, v):
        gu, gv = group_of.get(u), group_of.get(v)
        if gv is not None and gv in independent:
            return 0.0
        if gu is not None and gv is not None:
            return p_in if gu == gv else p_out
        if leads.get(u) is not None and leads[u] == gv or leads.get(v) is not None and leads[v] == gu:
            return p_lead
        if (u == 1 and v in leads) or (v == 1 and u in leads):
            return 0.9
        return p_out

    ids = [n.id for n in nodes]
    w = {}
    for u in ids:
        for v in ids:
            if u != v and rng.random() < prob(u, v):
                w[(u, v)] = int(rng.integers(1, max_w + 1))
    return Network.from_weights(nodes, w), GroupPartition(tuple(groups))


@pytest.fixture
def org():
    return make_org()
