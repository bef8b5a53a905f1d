"""Command-line front end: detect, diagnose, generate, bench.

Every command writes a manifest JSON next to its outputs recording the
resolved configuration, input digests and seed, so a finished run can be
reproduced bit for bit. Seeds default to 0; pass --random-seed to opt into
entropy (the drawn seed still lands in the manifest).

Exit codes: 0 success, 1 user or configuration error, 2 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import secrets
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .benchgen import (BenchmarkSpec, GenerationError, generate, sweep,
                       write_summary_csv, write_sweep_csv)
from .diagnostics import attraction_power, flood_fill_report, write_attraction_csv
from .graph import EdgeListError, load_edge_list, write_edge_list, write_remap_csv
from .metrics import MetricsError, community_report
from .propagation import (ConfigError, PropagationConfig, run,
                          write_labeling_csv, write_trace_csv)

_USER_ERRORS = (ConfigError, EdgeListError, GenerationError, MetricsError, OSError)


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record accompanying every command's outputs."""

    command: str
    config: dict
    input_digests: dict
    tool_version: str
    seed: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


def _sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(prefix: Path, command: str, config: dict,
                    inputs: list[str | Path], seed: int) -> None:
    manifest = RunManifest(
        command=command,
        config=config,
        input_digests={str(p): _sha256(p) for p in inputs},
        tool_version=__version__,
        seed=seed,
    )
    Path(f"{prefix}.manifest.json").write_text(manifest.to_json(), encoding="utf-8")


def _resolve_seed(args) -> int:
    if getattr(args, "random_seed", False):
        return secrets.randbits(63)
    return args.seed


def _resolve_jobs(args) -> int:
    if args.jobs is not None:
        return args.jobs
    env = os.environ.get("LABELFLOW_JOBS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _propagation_config(args, seed: int) -> PropagationConfig:
    return PropagationConfig(
        variant=args.algo,
        mode=args.mode,
        max_iterations=args.T,
        cycles=args.k,
        delta=args.delta,
        pref_exponent=args.pref_exponent,
        anneal=args.anneal,
        seed=seed,
    )


def _benchmark_spec(args, seed: int, mu: float) -> BenchmarkSpec:
    lo, hi = (int(x) for x in args.sizes.split(","))
    return BenchmarkSpec(
        num_nodes=args.n,
        mean_degree=args.dbar,
        max_degree=args.dmax,
        mu=mu,
        community_size_range=(lo, hi),
        degree_exponent=args.tau1,
        seed=seed,
    )


def cmd_detect(args) -> int:
    seed = _resolve_seed(args)
    cfg = _propagation_config(args, seed).resolved()
    g = load_edge_list(args.edge_list, one_based=args.one_based,
                       num_nodes=args.num_nodes)
    labeling, trace = run(g, cfg)
    report = community_report(g, labeling)
    prefix = Path(args.out)
    write_labeling_csv(g, labeling, f"{prefix}.communities.csv")
    write_trace_csv(trace, f"{prefix}.trace.csv")
    write_remap_csv(g, f"{prefix}.remap.csv")
    Path(f"{prefix}.report.json").write_text(report.to_json(indent=2) + "\n",
                                             encoding="utf-8")
    _write_manifest(prefix, "detect", asdict(cfg), [args.edge_list], seed)
    print(f"detected {report.community_count} communities "
          f"(Q={report.modularity:.6f}, {trace.iterations_used} iterations, "
          f"converged={trace.converged})")
    return 0


def cmd_diagnose(args) -> int:
    g = load_edge_list(args.edge_list, one_based=args.one_based,
                       num_nodes=args.num_nodes)
    profile = attraction_power(g)
    report = flood_fill_report(g, variance_warn=args.variance_warn,
                               hub_degree_fraction=args.hub_fraction)
    prefix = Path(args.out)
    write_attraction_csv(profile, g, f"{prefix}.attraction.csv")
    write_remap_csv(g, f"{prefix}.remap.csv")
    Path(f"{prefix}.risk.json").write_text(report.to_json(indent=2) + "\n",
                                           encoding="utf-8")
    _write_manifest(prefix, "diagnose",
                    {"variance_warn": args.variance_warn,
                     "hub_fraction": args.hub_fraction},
                    [args.edge_list], seed=0)
    print(f"attraction variance {report.variance:.4f}, risk {report.risk}")
    return 0


def cmd_generate(args) -> int:
    seed = _resolve_seed(args)
    spec = _benchmark_spec(args, seed, args.mu)
    planted = generate(spec)
    prefix = Path(args.out)
    write_edge_list(planted.graph, f"{prefix}.edges.txt")
    labels = planted.ground_truth.label_of
    with open(f"{prefix}.ground_truth.txt", "w", encoding="utf-8") as fh:
        for c in range(int(labels.max()) + 1):
            members = (planted.graph.external_ids[v]
                       for v in range(planted.graph.num_nodes) if labels[v] == c)
            fh.write(" ".join(str(m) for m in members) + "\n")
    meta = {
        "spec": asdict(spec),
        "generator": "planted partition: power-law degrees rescaled to the "
                     "mean, uniform community sizes, no overlaps",
        "realized_mu": planted.realized_mu,
        "realized_mean_degree": planted.realized_mean_degree,
        "dropped_internal_stubs": planted.dropped_internal_stubs,
        "dropped_external_stubs": planted.dropped_external_stubs,
        "nodes": planted.graph.num_nodes,
        "edges": planted.graph.num_edges,
        "communities": int(labels.max()) + 1,
    }
    Path(f"{prefix}.meta.json").write_text(
        json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    _write_manifest(prefix, "generate", asdict(spec), [], seed)
    print(f"generated {planted.graph.num_nodes} nodes / {planted.graph.num_edges} edges, "
          f"realized mu {planted.realized_mu:.4f}")
    return 0


def cmd_bench(args) -> int:
    seed = _resolve_seed(args)
    mu_values = [float(x) for x in args.mu_list.split(",")]
    algo_names = args.algos.split(",")
    algorithms = []
    for name in algo_names:
        algorithms.append(PropagationConfig(
            variant=name.strip(),
            mode=args.mode,
            max_iterations=args.T,
            cycles=args.k,
            delta=args.delta,
            pref_exponent=args.pref_exponent,
            anneal=args.anneal,
            seed=seed,
        ).resolved())
    base = _benchmark_spec(args, seed, mu_values[0])
    result = sweep(base, mu_values, args.seeds, algorithms, jobs=_resolve_jobs(args))
    prefix = Path(args.out)
    write_sweep_csv(result, f"{prefix}.sweep.csv")
    write_summary_csv(result, f"{prefix}.summary.csv")
    _write_manifest(prefix, "bench",
                    {"spec": asdict(base), "mu_values": mu_values,
                     "seeds_per_point": args.seeds,
                     "algorithms": [asdict(a) for a in algorithms]},
                    [], seed)
    for s in result.summary:
        print(f"mu={s.mu:g} {s.algorithm}: mean NMI {s.mean_nmi:.4f}, "
              f"mean Q {s.mean_modularity:.4f}")
    return 0


def _add_graph_input(parser):
    parser.add_argument("edge_list", help="edge list file, one 'u v' pair per line")
    parser.add_argument("--one-based", action="store_true",
                        help="input ids start at 1")
    parser.add_argument("--num-nodes", type=int, default=None,
                        help="declare the node count (required for isolated nodes)")


def _add_propagation_flags(parser, include_algo=True):
    if include_algo:
        parser.add_argument("--algo", default="classic",
                            choices=["classic", "leung", "clpa"],
                            help="propagation variant")
    parser.add_argument("--mode", default="async", choices=["async", "sync"])
    parser.add_argument("--k", type=int, default=100,
                        help="capacity growth cycles (clpa)")
    parser.add_argument("--T", type=int, default=None,
                        help="max iterations (default: 5*k for clpa, else 100)")
    parser.add_argument("--delta", type=float, default=0.1,
                        help="per-hop strength loss (leung)")
    parser.add_argument("--pref-exponent", type=float, default=0.1,
                        help="degree preference exponent (leung)")
    parser.add_argument("--anneal", default="off", choices=["linear", "off"],
                        help="tie-randomization schedule (clpa)")


def _add_seed_flags(parser):
    parser.add_argument("--seed", type=int, default=0, help="RNG seed")
    parser.add_argument("--random-seed", action="store_true",
                        help="draw the seed from system entropy")


def _add_spec_flags(parser):
    parser.add_argument("--n", type=int, default=1000, help="node count")
    parser.add_argument("--dbar", type=float, default=20.0, help="mean degree")
    parser.add_argument("--dmax", type=int, default=100, help="max degree")
    parser.add_argument("--sizes", default="20,100",
                        help="community size range 'lo,hi'")
    parser.add_argument("--tau1", type=float, default=2.5,
                        help="degree power-law exponent")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="labelflow",
        description="Community detection by capacity-controlled label propagation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="find communities in an edge list")
    _add_graph_input(p)
    _add_propagation_flags(p)
    _add_seed_flags(p)
    p.add_argument("--out", default="detect", help="output file prefix")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("diagnose", help="pre-run flood-fill risk report")
    _add_graph_input(p)
    p.add_argument("--variance-warn", type=float, default=5.0,
                   help="attraction variance warning threshold")
    p.add_argument("--hub-fraction", type=float, default=0.1,
                   help="degree fraction that marks a hub")
    p.add_argument("--out", default="diagnose", help="output file prefix")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("generate", help="generate one planted-partition graph")
    _add_spec_flags(p)
    p.add_argument("--mu", type=float, required=True, help="mixing parameter")
    _add_seed_flags(p)
    p.add_argument("--out", default="benchmark", help="output file prefix")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="sweep algorithms over a mixing grid")
    _add_spec_flags(p)
    p.add_argument("--mu-list", required=True, help="comma-separated mu values")
    p.add_argument("--seeds", type=int, default=10, help="replicates per mu")
    p.add_argument("--algos", default="classic,clpa",
                   help="comma-separated variants to compare")
    _add_propagation_flags(p, include_algo=False)
    _add_seed_flags(p)
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: LABELFLOW_JOBS or CPU count)")
    p.add_argument("--out", default="bench", help="output file prefix")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
