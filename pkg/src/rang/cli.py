"""Command-line entry point: ``rang validate|summarize|generate|analyze|stability``.

Exit codes: 0 success, 1 I/O or configuration error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .centrality import UNIT, WEIGHTED, centrality_rows
from .classify import detect_independent, mark_independent, read_summary, summarize, write_summary
from .community import to_undirected
from .generate import MODELS, GenConfig, GenerationError, generate_ensemble
from .ingest import DatasetError, ValidationError, anonymize_check, load_dataset
from .model import validate_network, validate_partition
from .pipeline import run_analysis, run_stability, save_ensemble
from .stability import DEFAULT_STABLE_SHARE, MODES, census_to_json, degrees_to_csv

EXIT_OK, EXIT_IO, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _threads(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        n = int(os.environ.get("RANG_THREADS", "1") or 1)
    if n < 1:
        raise UsageError("--threads must be at least 1")
    return n


def _emit(args, human: str, data: dict):
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(human)


def cmd_validate(args) -> int:
    try:
        net, part = load_dataset(args.dir, validate=False)
    except DatasetError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    violations = validate_network(net)
    warnings = anonymize_check(net)
    if not violations:
        more, part_warnings = validate_partition(net, part)
        violations += more
        warnings += part_warnings
    flagged = [g for g in detect_independent(part, net) if not part.by_gid()[g].independent]
    warnings += [f"group {g} looks independent (no incoming edges from outside)" for g in flagged]
    lines = [f"violation: {v}" for v in violations] + [f"warning: {w}" for w in warnings]
    lines.append(f"{len(net.nodes)} nodes, {len(net.edges)} edges, {len(part)} groups: " + ("INVALID" if violations else "ok"))
    _emit(
        args,
        "\n".join(lines),
        {"valid": not violations, "violations": [str(v) for v in violations], "warnings": warnings},
    )
    return EXIT_INVALID if violations else EXIT_OK


def _load_source(directory: Path, auto_independent: bool):
    if not (directory / "nodes.csv").exists() and (directory / "summary.json").exists():
        return read_summary(directory / "summary.json"), None
    net, part = load_dataset(directory)
    if auto_independent:
        part = mark_independent(part, detect_independent(part, net))
    return net, part


def cmd_summarize(args) -> int:
    net, part = _load_source(Path(args.dir), args.auto_independent)
    if part is None:
        raise UsageError(f"{args.dir} holds only a summary")
    summary = summarize(net, part)
    out = Path(args.out) if args.out else Path(args.dir) / "summary.json"
    write_summary(summary, out)
    _emit(
        args,
        f"{len(summary.all_classes())} classes, W_total={summary.total_weight}, "
        f"residual W={summary.residual_weight} -> {out}",
        {"classes": len(summary.all_classes()), "total_weight": summary.total_weight, "path": str(out)},
    )
    return EXIT_OK


def cmd_generate(args) -> int:
    cfg = GenConfig(model=args.model, p_B=args.pb, seed=args.seed, count=args.count, sbm_selection=args.sbm_selection)
    source, part = _load_source(Path(args.dir), args.auto_independent)
    ens = generate_ensemble(source, cfg, part, threads=_threads(args))
    save_ensemble(ens, args.out, anonymize=args.anonymize)
    totals = [n.total_weight for n in ens.networks]
    _emit(
        args,
        f"wrote {len(ens)} {cfg.model} networks to {args.out} (mean total weight {sum(totals) / len(totals):.1f})",
        {"count": len(ens), "model": cfg.model, "out": str(args.out), "total_weights": totals},
    )
    return EXIT_OK


def cmd_analyze(args) -> int:
    mode = UNIT if args.unit_length else WEIGHTED
    net, report = run_analysis(args.original, args.ensemble, args.m, mode, _threads(args))
    out = Path(args.out) if args.out else Path(args.ensemble)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    (out / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "betweenness", "rbc", "rank"])
    for row in centrality_rows(to_undirected(net), mode):
        w.writerow([row[0], repr(row[1]), repr(row[2]), row[3]])
    (out / "centrality.csv").write_text(buf.getvalue(), encoding="utf-8")
    agg = report.aggregates()
    table = report.summary_table()
    human = "\n".join(
        [f"{len(report.rows)} networks, m={report.m}, original leaders {report.original_leaders}"]
        + [
            f"{name:>8}: " + "  ".join(f"{k} {agg[name][k]:.3f}" for k in ("mean", "median", "min", "max"))
            for name in ("nmi", "jaccard", "combined")
        ]
        + [f"combined score (median NMI x mean Jaccard): {table['combined_score']:.3f}"]
    )
    _emit(args, human, {"aggregates": agg, "table": table})
    return EXIT_OK


def cmd_stability(args) -> int:
    meta, census, verdict = run_stability(args.original, args.ensemble, args.matching, args.threshold, _threads(args))
    out = Path(args.out) if args.out else Path(args.ensemble)
    out.mkdir(parents=True, exist_ok=True)
    (out / "metagraph_degrees.csv").write_text(degrees_to_csv(meta), encoding="utf-8")
    (out / "census.json").write_text(census_to_json(census, verdict), encoding="utf-8")
    human = (
        f"{args.matching} matching: original structure in {verdict.original_count}/{verdict.size} "
        f"networks ({verdict.original_share:.1%}), {len(census)} distinct structures, "
        f"top frequencies {verdict.top_frequencies}: " + ("stable" if verdict.stable else "not stable")
    )
    _emit(args, human, verdict.to_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rang", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.add_argument("--threads", type=int, default=None, help="worker processes (env RANG_THREADS)")

    v = sub.add_parser("validate", help="check a dataset directory")
    v.add_argument("dir")
    v.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("summarize", help="write the shareable per-class summary")
    s.add_argument("dir")
    s.add_argument("--out")
    s.add_argument("--auto-independent", action="store_true")
    s.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_summarize)

    g = sub.add_parser("generate", help="generate an ensemble of synthetic networks")
    g.add_argument("dir")
    g.add_argument("--model", choices=MODELS, default="bwrn")
    g.add_argument("--count", type=int, default=100)
    g.add_argument("--pb", type=float, default=0.875)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--sbm-selection", choices=("uniform", "weighted"), default="uniform")
    g.add_argument("--auto-independent", action="store_true", help="apply detected independent groups")
    g.add_argument("--anonymize", action="store_true", help="shuffle node ids in the output")
    common(g)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="compare an ensemble with the original")
    a.add_argument("original")
    a.add_argument("ensemble")
    a.add_argument("--m", type=int, default=None, help="number of management nodes")
    a.add_argument("--unit-length", action="store_true", help="unweighted shortest paths")
    a.add_argument("--out")
    common(a)
    a.set_defaults(func=cmd_analyze)

    st = sub.add_parser("stability", help="meta-graph stability analysis")
    st.add_argument("original")
    st.add_argument("ensemble")
    st.add_argument("--matching", choices=MODES, default="exact")
    st.add_argument("--threshold", type=float, default=DEFAULT_STABLE_SHARE)
    st.add_argument("--out")
    common(st)
    st.set_defaults(func=cmd_stability)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "count", 1) is not None and getattr(args, "count", 1) < 1:
            raise UsageError("--count must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_IO
    except ValidationError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except DatasetError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (OSError, ValueError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
