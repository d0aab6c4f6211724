import math

import numpy as np
import pytest

from rang.classify import Roles, summarize
from rang.generate import (
    GenConfig,
    bwrn_generate,
    bwrn_params,
    bwrn_sample_weight,
    bwrn_sample_weights,
    generate_ensemble,
    sbm_generate,
    wrg_generate,
)
from rang.model import ClassKey, Group, GroupPartition, Network, NodeRecord, validate_network

from conftest import make_org
from oracles import bwrn_pmf


def rng(seed=0):
    return np.random.default_rng(seed)


@pytest.mark.parametrize(
    "w, p_B, w_B, p_a",
    [(4, 1.0, 4, 0.0), (1, 0.875, 1, 0.125), (2, 0.5, 4, 0.0), (3, 0.3, 10, 0.0), (50, 0.99, 50, 0.5), (7, 0.7, 10, 0.0)],
)
def test_params(w, p_B, w_B, p_a):
    par = bwrn_params(w, p_B)
    assert par.w_B == w_B
    assert par.p_a == pytest.approx(p_a, abs=1e-12)
    assert 0 <= par.p_a < 1
    assert par.max_weight <= math.ceil(w / p_B)


def test_deterministic_at_pb_one():
    r = rng()
    assert {bwrn_sample_weight(4, 1.0, r) for _ in range(100)} == {4}


def test_pmf_w1_pb0875():
    # one Bernoulli(0.875) trial and one extra Bernoulli(0.125) trial
    pmf = bwrn_pmf(1, 0.875)
    assert pmf[0] == pytest.approx(0.125 * 0.875)
    assert pmf[2] == pytest.approx(0.875 * 0.125)
    assert pmf[0] == pytest.approx(0.109375)
    samples = bwrn_sample_weights(1, 0.875, rng(1), 200_000)
    for k, pk in enumerate(pmf):
        se = math.sqrt(pk * (1 - pk) / len(samples))
        assert abs((samples == k).mean() - pk) < 5 * se


def test_pmf_w2_pb05_is_binomial():
    pmf = bwrn_pmf(2, 0.5)
    assert pmf == pytest.approx([1 / 16, 4 / 16, 6 / 16, 4 / 16, 1 / 16])
    samples = bwrn_sample_weights(2, 0.5, rng(2), 200_000)
    assert abs((samples == 0).mean() - 1 / 16) < 5 * math.sqrt(1 / 16 * 15 / 16 / 200_000)


@pytest.mark.parametrize("w", [1, 2, 5, 10])
@pytest.mark.parametrize("p_B", [0.5, 0.875, 0.99])
def test_scalar_and_vector_agree_with_exact_pmf(w, p_B):
    pmf = bwrn_pmf(w, p_B)
    mean = sum(k * p for k, p in enumerate(pmf))
    var = sum(k * k * p for k, p in enumerate(pmf)) - mean**2
    par = bwrn_params(w, p_B)
    # closed forms agree with the enumerated distribution
    assert mean == pytest.approx(w)
    assert var == pytest.approx(par.variance(p_B))
    r = rng(w)
    scalar = np.array([bwrn_sample_weight(w, p_B, r) for _ in range(4000)])
    assert abs(scalar.mean() - w) < 5 * math.sqrt(var / 4000)
    assert scalar.min() >= 0 and scalar.max() <= math.ceil(w / p_B)


def single_class(weights, size=4):
    nodes = [NodeRecord(i) for i in range(size)]
    w = {}
    pairs = [(u, v) for u in range(size) for v in range(size) if u != v]
    for pair, x in zip(pairs, weights):
        w[pair] = x
    net = Network.from_weights(nodes, w)
    part = GroupPartition((Group(0, set(range(size))),))
    return net, part


def test_bwrn_pb1_preserves_weights():
    net, part = single_class([5, 3, 1])
    out = bwrn_generate(summarize(net, part), 1.0, rng(3))
    assert sorted(e.weight for e in out.edges) == [1, 3, 5]
    assert validate_network(out) == []


def test_bwrn_empty_class():
    net, part = single_class([])
    assert bwrn_generate(summarize(net, part), 0.875, rng()).edges == ()


def test_bwrn_edges_stay_in_their_class():
    net, part = make_org(seed=5, independent=(1,))
    s = summarize(net, part)
    roles = Roles(s.nodes, s.partition)
    for seed in range(20):
        out = bwrn_generate(s, 0.875, rng(seed))
        assert validate_network(out) == []
        by_class = {}
        for e in out.edges:
            key = roles.classify(e.source, e.target)
            by_class[key] = by_class.get(key, 0) + 1
        for c in s.all_classes():
            assert by_class.get(c.key, 0) <= c.edge_count


def test_bwrn_full_class_fills_every_pair():
    net, part = single_class([2] * 12)
    out = bwrn_generate(summarize(net, part), 1.0, rng(4))
    assert len(out.edges) == 12


def test_bwrn_one_edge_monte_carlo_mean():
    net, part = single_class([3], size=2)
    s = summarize(net, part)
    r = rng(5)
    totals = np.array([bwrn_generate(s, 0.875, r).total_weight for _ in range(100_000)])
    assert abs(totals.mean() - 3) < 0.01 * 3


def test_wrg_zero_weight_class_has_no_edges():
    net, part = single_class([])
    assert wrg_generate(summarize(net, part), rng()).edges == ()


def test_wrg_per_pair_mean_when_w_equals_e():
    net, part = single_class([1] * 12)  # W = E = 12, p = 1/2
    s = summarize(net, part)
    r = rng(6)
    per_pair = []
    for _ in range(4000):
        w = wrg_generate(s, r).weights()
        per_pair.append(w.get((0, 1), 0))
    per_pair = np.array(per_pair)
    # geometric with p = 1/2: mean 1, variance p / (1 - p)^2 = 2
    assert abs(per_pair.mean() - 1) < 5 * math.sqrt(2 / 4000)


def test_wrg_class_total():
    net, part = make_org(seed=8)
    s = summarize(net, part)
    r = rng(7)
    cls = s.get(ClassKey("intra", 0))
    roles = Roles(s.nodes, s.partition)
    totals = []
    for _ in range(5000):
        out = wrg_generate(s, r)
        totals.append(sum(e.weight for e in out.edges if roles.classify(e.source, e.target) == cls.key))
    assert abs(np.mean(totals) - cls.weight_sum) < 0.02 * cls.weight_sum


def test_sbm_zero_total():
    net = Network((NodeRecord(1), NodeRecord(2)), ())
    out = sbm_generate(net, GroupPartition((Group(0, {1, 2}),)), rng())
    assert out.edges == ()


def test_sbm_two_node_group_exact_total():
    net = Network.from_weights([NodeRecord(1), NodeRecord(2)], {(1, 2): 3, (2, 1): 2})
    part = GroupPartition((Group(0, {1, 2}),))
    for seed in range(20):
        out = sbm_generate(net, part, rng(seed))
        assert out.total_weight == 5
        assert {(e.source, e.target) for e in out.edges} <= {(1, 2), (2, 1)}


@pytest.mark.parametrize("selection", ["uniform", "weighted"])
def test_sbm_zero_probability_pairs_get_nothing(selection):
    nodes = [NodeRecord(i) for i in range(6)]
    net = Network.from_weights(nodes, {(0, 1): 4, (1, 2): 2, (2, 0): 1})
    part = GroupPartition((Group(0, {0, 1, 2}), Group(1, {3, 4, 5})))
    for seed in range(20):
        out = sbm_generate(net, part, rng(seed), selection)
        assert out.total_weight == 7
        assert all(e.source < 3 and e.target < 3 for e in out.edges)


@pytest.mark.parametrize("model", ["bwrn", "wrg", "sbm"])
def test_ensemble_determinism_and_validity(model):
    net, part = make_org(seed=9, independent=(2,))
    cfg = GenConfig(model=model, count=5, seed=7)
    a = generate_ensemble(net, cfg, part)
    b = generate_ensemble(net, cfg, part)
    assert a.networks == b.networks
    assert len({n for n in a.networks}) > 1
    for n in a.networks:
        assert validate_network(n) == []
        assert n.nodes == net.canonical().nodes
    assert a.partition == part.canonical()


def test_ensemble_parallel_matches_serial():
    net, part = make_org(seed=10)
    cfg = GenConfig(model="bwrn", count=6, seed=3)
    assert generate_ensemble(net, cfg, part, threads=3).networks == generate_ensemble(net, cfg, part).networks


def test_ensemble_from_summary_equals_from_network():
    net, part = make_org(seed=11)
    cfg = GenConfig(model="wrg", count=3, seed=5)
    assert generate_ensemble(summarize(net, part), cfg).networks == generate_ensemble(net, cfg, part).networks


def test_singleton_ensemble():
    net, part = make_org()
    assert len(generate_ensemble(net, GenConfig(count=1), part)) == 1


@pytest.mark.parametrize(
    "kwargs", [{"p_B": 0.0}, {"p_B": 1.5}, {"count": 0}, {"model": "er"}, {"seed": -1}]
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        GenConfig(**kwargs)
