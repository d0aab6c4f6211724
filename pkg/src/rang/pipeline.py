"""Glue between the generators, detectors and metrics, shared by the CLI."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .centrality import WEIGHTED, detect_leaders, relative_betweenness
from .community import louvain, to_undirected
from .compare import ensemble_report
from .generate import GeneratedEnsemble, member_rng, shuffle_ids
from .ingest import load_dataset, save_dataset
from .model import GroupPartition, Network
from .stability import build_metagraph, stability_verdict, structure_census

MANIFEST = "manifest.json"


def management_count(net: Network) -> int:
    return sum(1 for n in net.nodes if n.level >= 2)


def analyze_network(net: Network, m: int, mode: str = WEIGHTED):
    """Louvain groups and betweenness leaders of one network."""
    graph = to_undirected(net)
    part = louvain(graph)
    leaders = detect_leaders(graph, m, scores=relative_betweenness(graph, mode)) if len(graph.nodes) >= m else set()
    return part, leaders


def _analyze_dir(args):
    path, m, mode = args
    net, _ = load_dataset(path)
    return analyze_network(net, m, mode)


def _map(fn, jobs, threads):
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    return [fn(j) for j in jobs]


def save_ensemble(ens: GeneratedEnsemble, out, anonymize: bool = False) -> None:
    """One dataset directory per member plus ``manifest.json``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for k, net in enumerate(ens.networks):
        part = ens.partition
        if anonymize:
            net, part = shuffle_ids(net, part, member_rng(ens.config.seed, k, purpose=1))
        save_dataset(net, part, out / str(k))
    cfg = ens.config
    manifest = {
        "model": cfg.model,
        "p_B": cfg.p_B,
        "seed": cfg.seed,
        "count": cfg.count,
        "sbm_selection": cfg.sbm_selection,
        "anonymized": anonymize,
        "version": __version__,
    }
    (out / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def ensemble_dirs(directory) -> list[Path]:
    """Member directories of a saved ensemble, in member order."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"{directory}: no such directory")
    dirs = [p for p in directory.iterdir() if p.is_dir() and p.name.isdigit()]
    if not dirs:
        raise FileNotFoundError(f"{directory}: no ensemble members found")
    return sorted(dirs, key=lambda p: int(p.name))


def detect_ensemble(directory, m: int, mode: str = WEIGHTED, threads: int = 1):
    jobs = [(p, m, mode) for p in ensemble_dirs(directory)]
    return _map(_analyze_dir, jobs, threads)


def run_analysis(original_dir, ensemble_dir, m: int = None, mode: str = WEIGHTED, threads: int = 1):
    net, _ = load_dataset(original_dir)
    if m is None:
        m = max(1, management_count(net))
    ref_part, ref_leaders = analyze_network(net, m, mode)
    detected = detect_ensemble(ensemble_dir, m, mode, threads)
    report = ensemble_report(detected, ref_part, ref_leaders, net.node_ids, m)
    return net, report


def run_stability(original_dir, ensemble_dir, matching: str, threshold: float, threads: int = 1):
    net, _ = load_dataset(original_dir)
    graph = to_undirected(net)
    original = louvain(graph)
    partitions = _map(_louvain_dir, ensemble_dirs(ensemble_dir), threads)
    meta = build_metagraph(partitions, matching, original)
    census = structure_census(partitions, matching)
    verdict = stability_verdict(census, original, len(partitions), matching, threshold)
    return meta, census, verdict


def _louvain_dir(path) -> GroupPartition:
    net, _ = load_dataset(path)
    return louvain(to_undirected(net))

