"""Synthetic network generators.

Three weight models share the same output contract (node roster and groups
copied from the input, edges resampled):

* ``bwrn``: each original edge weight ``w`` is re-drawn as the number of
  successes in ``floor(w / p_B)`` Bernoulli(p_B) trials plus, when those
  fall short of ``w`` in expectation, one Bernoulli(p_a) trial. The new edge
  lands on a random unconnected pair of the same edge class.
* ``wrg``: every pair of a class gets a geometric weight with success
  probability ``W / (W + E)``.
* ``sbm``: weighted stochastic block baseline that adds unit weights until
  the original total weight is reached.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .classify import Roles, summarize
from .model import EdgeClassSummary, GroupPartition, Group, Network, NodeRecord, sorted_ids

BWRN, WRG, SBM = "bwrn", "wrg", "sbm"
MODELS = (BWRN, WRG, SBM)
DEFAULT_PB = 0.875
WRG_WEIGHT_CAP = 10**6
_EPS = 1e-9


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenConfig:
    model: str = BWRN
    p_B: float = DEFAULT_PB
    seed: int = 0
    count: int = 1
    # "uniform" or "weighted" choice of the group pair in the SBM baseline
    sbm_selection: str = "uniform"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; expected one of {', '.join(MODELS)}")
        if not (0.0 < self.p_B <= 1.0) or math.isnan(self.p_B):
            raise ValueError(f"p_B must lie in (0, 1], got {self.p_B}")
        if self.count < 1:
            raise ValueError(f"count must be at least 1, got {self.count}")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a non-negative 64-bit integer")
        if self.sbm_selection not in ("uniform", "weighted"):
            raise ValueError(f"unknown SBM pair selection {self.sbm_selection!r}")


@dataclass(frozen=True)
class BwrnParams:
    w: int
    w_B: int
    p_a: float

    @property
    def expected(self) -> float:
        return self.w

    def variance(self, p_B: float) -> float:
        return self.w * (1 - p_B) + self.p_a * (p_B - self.p_a)

    @property
    def max_weight(self) -> int:
        return self.w_B + (1 if self.p_a > 0 else 0)


def bwrn_params(w: int, p_B: float) -> BwrnParams:
    """Trial count and extra-trial probability for an original weight ``w``."""
    ratio = w / p_B
    w_B = math.floor(ratio)
    # w / p_B landing a hair under an integer is float error, not a fraction
    if round(ratio) - ratio < _EPS and round(ratio) > w_B:
        w_B = round(ratio)
    p_a = w - p_B * w_B
    if abs(p_a) < _EPS:
        p_a = 0.0
    return BwrnParams(w, w_B, p_a)


def bwrn_sample_weight(w: int, p_B: float, rng: np.random.Generator) -> int:
    par = bwrn_params(w, p_B)
    k = int(rng.binomial(par.w_B, p_B)) if par.w_B else 0
    if par.p_a > 0 and rng.random() < par.p_a:
        k += 1
    return k


def bwrn_sample_weights(w: int, p_B: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized ``bwrn_sample_weight`` draws."""
    par = bwrn_params(w, p_B)
    k = rng.binomial(par.w_B, p_B, size=size)
    if par.p_a > 0:
        k += rng.random(size) < par.p_a
    return k


def _output(summary: EdgeClassSummary, weights: dict) -> Network:
    return Network.from_weights(summary.nodes, weights)


def bwrn_generate(summary: EdgeClassSummary, p_B: float, rng: np.random.Generator) -> Network:
    """Place every original edge weight, heaviest first, on a random pair of its class."""
    roles = Roles(summary.nodes, summary.partition)
    weights: dict = {}
    for cls in summary.all_classes():
        if not cls.weights:
            continue
        pool = list(roles.pairs(cls.key))
        free = len(pool)
        for w in sorted(cls.weights, reverse=True):
            if free == 0:
                raise GenerationError(f"class {cls.key.label()} exhausted")
            idx = int(rng.integers(free))
            k = bwrn_sample_weight(w, p_B, rng)
            if k == 0:
                continue
            weights[pool[idx]] = k
            pool[idx], pool[free - 1] = pool[free - 1], pool[idx]
            free -= 1
    return _output(summary, weights)


def wrg_class_probability(W: int, E: int) -> float:
    return W / (W + E) if W + E > 0 else 0.0


def wrg_sample_class(W: int, E: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """Geometric weights for the ``E`` pairs of one class, ``size`` replications."""
    shape = (E,) if size is None else (size, E)
    p = wrg_class_probability(W, E)
    if p == 0.0:
        return np.zeros(shape, dtype=np.int64)
    # numpy's geometric counts trials up to and including the first failure
    ks = rng.geometric(1.0 - p, size=shape) - 1
    if ks.size and ks.max() >= WRG_WEIGHT_CAP:
        raise GenerationError(f"weight cap reached (p={p})")
    return ks


def wrg_generate(summary: EdgeClassSummary, rng: np.random.Generator) -> Network:
    """Geometric weight on every pair of every class, p = W / (W + E)."""
    roles = Roles(summary.nodes, summary.partition)
    weights: dict = {}
    for cls in summary.all_classes():
        if cls.weight_sum == 0 or cls.capacity == 0:
            continue
        ks = wrg_sample_class(cls.weight_sum, cls.capacity, rng)
        for pair, k in zip(roles.pairs(cls.key), ks.tolist()):
            if k:
                weights[pair] = k
    return _output(summary, weights)


def sbm_blocks(net: Network, part: GroupPartition) -> list[list]:
    """Blocks for the baseline: each group with its leader, then every
    remaining node on its own."""
    blocks = []
    covered = set()
    for g in part.canonical().groups:
        block = set(g.members)
        if g.leader is not None:
            block.add(g.leader)
        blocks.append(sorted_ids(block))
        covered |= block
    blocks += [[n] for n in sorted_ids(set(net.node_ids) - covered)]
    return blocks


def sbm_generate(
    net: Network,
    part: GroupPartition,
    rng: np.random.Generator,
    selection: str = "uniform",
) -> Network:
    """Weighted SBM baseline.

    Repeats: pick an ordered block pair, pick two distinct nodes from it, run a
    Bernoulli trial with the pair's share of the total weight, add 1 to the
    pair on success. Stops exactly at the original total weight.
    """
    total = net.total_weight
    if total == 0:
        return Network(net.canonical().nodes, ())
    blocks = sbm_blocks(net, part)
    block_of = {u: b for b, ms in enumerate(blocks) for u in ms}
    nb = len(blocks)
    mass = np.zeros((nb, nb))
    for e in net.edges:
        mass[block_of[e.source], block_of[e.target]] += e.weight
    prob = mass / total
    pairs = [(a, b) for a in range(nb) for b in range(nb) if a != b or len(blocks[a]) > 1]
    pa = np.array([a for a, _ in pairs])
    pb = np.array([b for _, b in pairs])
    p_pair = prob[pa, pb]
    select = None
    if selection == "weighted":
        select = p_pair / p_pair.sum()
        expected_rate = float(select @ p_pair)
    else:
        expected_rate = float(p_pair.mean())

    weights: dict = {}
    remaining = total
    while remaining > 0:
        batch = int(min(1 << 20, max(4096, 1.25 * remaining / expected_rate)))
        if select is None:
            chosen = rng.integers(len(pairs), size=batch)
        else:
            chosen = rng.choice(len(pairs), size=batch, p=select)
        hits = chosen[rng.random(batch) < p_pair[chosen]][:remaining]
        for c in hits.tolist():
            src, dst = blocks[pa[c]], blocks[pb[c]]
            u = int(rng.integers(len(src)))
            if pa[c] == pb[c]:
                # uniform over the other members, same law as redrawing on u == v
                v = (u + 1 + int(rng.integers(len(src) - 1))) % len(src)
            else:
                v = int(rng.integers(len(dst)))
            key = (src[u], dst[v])
            weights[key] = weights.get(key, 0) + 1
        remaining -= len(hits)
    return Network.from_weights(net.canonical().nodes, weights)


def member_rng(seed: int, k: int, purpose: int = 0) -> np.random.Generator:
    """Independent stream for ensemble member ``k``; ``purpose`` separates
    auxiliary streams (id shuffling) from the generator stream."""
    key = (k,) if purpose == 0 else (k, purpose)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def shuffle_ids(net: Network, part: GroupPartition, rng: np.random.Generator):
    """Relabel node ids with a random permutation of the same id set."""
    ids = sorted_ids(net.node_ids)
    perm = rng.permutation(len(ids))
    new = {old: ids[p] for old, p in zip(ids, perm.tolist())}
    nodes = [NodeRecord(new[n.id], n.level) for n in net.nodes]
    weights = {(new[e.source], new[e.target]): e.weight for e in net.edges}
    groups = [
        Group(g.gid, frozenset(new[m] for m in g.members), None if g.leader is None else new[g.leader], g.independent)
        for g in part.groups
    ]
    return Network.from_weights(nodes, weights), GroupPartition(tuple(groups))


@dataclass
class GeneratedEnsemble:
    config: GenConfig
    partition: GroupPartition
    networks: list[Network] = field(default_factory=list)

    def __len__(self):
        return len(self.networks)


def generate_one(
    source: Union[Network, EdgeClassSummary],
    cfg: GenConfig,
    k: int,
    part: Optional[GroupPartition] = None,
) -> Network:
    rng = member_rng(cfg.seed, k)
    if cfg.model == SBM:
        if not isinstance(source, Network):
            raise GenerationError("the SBM baseline needs the original network, not a summary")
        return sbm_generate(source, part, rng, cfg.sbm_selection)
    summary = source if isinstance(source, EdgeClassSummary) else summarize(source, part)
    if cfg.model == BWRN:
        return bwrn_generate(summary, cfg.p_B, rng)
    return wrg_generate(summary, rng)


def _worker(args):
    return generate_one(*args)


def generate_ensemble(
    source: Union[Network, EdgeClassSummary],
    cfg: GenConfig,
    part: Optional[GroupPartition] = None,
    threads: int = 1,
) -> GeneratedEnsemble:
    """Generate ``cfg.count`` networks; member ``k`` uses stream ``(seed, k)``
    so the result does not depend on ``threads``."""
    if isinstance(source, Network):
        if part is None:
            raise ValueError("a partition is required when generating from a network")
        if cfg.model != SBM:
            source = summarize(source, part)
    part = source.partition if isinstance(source, EdgeClassSummary) else part.canonical()
    jobs = [(source, cfg, k, part) for k in range(cfg.count)]
    if threads > 1 and cfg.count > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            nets = list(pool.map(_worker, jobs, chunksize=max(1, cfg.count // (4 * threads))))
    else:
        nets = [_worker(j) for j in jobs]
    return GeneratedEnsemble(cfg, part, nets)
