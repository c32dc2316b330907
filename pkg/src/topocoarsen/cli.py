"""Command-line entry point: ``topocoarsen coarsen|verify|stats|sweep``.

Exit codes: 0 success, 1 usage or config error, 2 data error, 3 graph too
large for the homology oracle, 4 a Betti number changed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import statistics
import sys
import time

from .graph import SupernodeMap
from .io import IngestError, ingest, write_outputs
from .oracle import OracleScaleError, betti, component_count
from .pipeline import CoarseningConfig, ConfigError, coarsen, exact_coarsening

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_ORACLE, EXIT_VERIFY = 0, 1, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _ratios(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad ratio list {text!r}") from None


def default_theta1(d_bar: float) -> int:
    return max(1, math.ceil(4 * d_bar))


def default_theta2(n: int) -> int:
    return -(-n // 100)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="topocoarsen",
                description="Topology-preserving graph coarsening.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_run_flags(sp):
        sp.add_argument("--theta1", type=float,
                        help="degree threshold (default: 4x average degree)")
        sp.add_argument("--theta2", type=int,
                        help="min removals per relaxed pass (default: 1%% of nodes)")
        sp.add_argument("--exact-iters", type=int, default=10)
        sp.add_argument("--approx-iters", type=int, default=100)
        sp.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("coarsen", help="coarsen a graph and write the results")
    c.add_argument("--input", required=True, help="edge list, one 'u v' per line")
    c.add_argument("--features", help="CSV: external_id,f1,...,fd")
    c.add_argument("--labels", help="CSV: external_id,label")
    c.add_argument("--ratio", type=float, required=True, help="target ratio c in (0, 1]")
    c.add_argument("--drop-edge-ratio", type=float, default=0.0)
    c.add_argument("--out-dir", required=True)
    c.add_argument("--report", choices=["json", "text"], default="text")
    add_run_flags(c)

    v = sub.add_parser("verify", help="check Betti numbers survive exact coarsening")
    v.add_argument("--input", required=True)
    v.add_argument("--max-nodes", type=int, default=200)
    v.add_argument("--max-dim", type=int, choices=[2, 3], default=2)
    v.add_argument("--theta1", type=float, default=math.inf)
    v.add_argument("--exact-iters", type=int, default=100)
    v.add_argument("--ratios", type=_ratios,
                   help="also trace beta1 over a ratio sweep, e.g. 0.9,0.7,0.5")
    v.add_argument("--sweep-out", help="CSV path for the sweep (default: stdout)")

    s = sub.add_parser("stats", help="basic graph statistics")
    s.add_argument("--input", required=True)

    w = sub.add_parser("sweep", help="time coarsening over several ratios")
    w.add_argument("--input", required=True)
    w.add_argument("--ratios", type=_ratios, required=True)
    w.add_argument("--repeat", type=int, default=1)
    w.add_argument("--out", help="CSV path (default: stdout)")
    add_run_flags(w)
    return p


def _config(args, ds, ratio: float, drop: float = 0.0) -> CoarseningConfig:
    n = ds.graph.capacity
    theta1 = args.theta1 if args.theta1 is not None else default_theta1(
        ds.graph.average_degree())
    theta2 = args.theta2 if args.theta2 is not None else default_theta2(n)
    return CoarseningConfig(theta1=theta1, theta2=theta2,
                            exact_iters=args.exact_iters,
                            approx_iters=args.approx_iters, target_ratio=ratio,
                            drop_edge_ratio=drop, rng_seed=args.seed)


def cmd_coarsen(args) -> int:
    ds = ingest(args.input, args.features, args.labels)
    config = _config(args, ds, args.ratio, args.drop_edge_ratio)
    result = coarsen(ds.graph, config, ds.attributes,
                     ingest_warnings=ds.warnings)
    write_outputs(result, ds.ids, args.out_dir)
    rep = result.report
    if args.report == "json":
        print(json.dumps(rep.to_dict(), indent=2))
    else:
        print(f"nodes {rep.original_nodes} -> {rep.final_nodes}  "
              f"edges {rep.original_edges} -> {rep.final_edges}")
        print(f"final_ratio {rep.final_ratio:.4f} (target {rep.target_ratio}, "
              f"{'reached' if rep.ratio_reached else 'NOT reached'})")
        print(f"theta1 {config.theta1:g}  theta2 {config.theta2}  r_final {rep.r_final}")
        for rec in rep.phase_log:
            print(f"  {rec.phase:<9} -nodes {rec.nodes_removed:<8} "
                  f"-edges {rec.edges_removed:<8} +edges {rec.edges_inserted:<6} "
                  f"r={rec.r_value} {rec.wall_time:.3f}s")
        for msg in rep.warnings:
            print(f"warning: {msg}")
        print(f"wrote {args.out_dir}")
    return EXIT_OK


def cmd_verify(args) -> int:
    ds = ingest(args.input)
    g = ds.graph
    if g.capacity > args.max_nodes:
        raise OracleScaleError(f"{g.capacity} nodes exceeds --max-nodes {args.max_nodes}")
    before = betti(g, args.max_dim)
    work = g.copy()
    config = CoarseningConfig(theta1=args.theta1, exact_iters=args.exact_iters,
                              target_ratio=1.0 / max(g.capacity, 1) / 2)
    exact_coarsening(work, SupernodeMap(g.capacity), config)
    after = betti(work, args.max_dim)
    ok = True
    print(f"nodes {g.node_count} -> {work.node_count}  "
          f"edges {g.edge_count} -> {work.edge_count}")
    for k, (b, a) in enumerate(zip(before.as_tuple(), after.as_tuple())):
        status = "PASS" if a == b else "FAIL"
        ok &= a == b
        print(f"beta{k} {status} {b} -> {a}")
    if args.ratios:
        fh = open(args.sweep_out, "w", newline="") if args.sweep_out else sys.stdout
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["ratio", "final_ratio", "beta1"])
            n = g.capacity
            for c in args.ratios:
                work = g.copy()
                cfg = CoarseningConfig(theta1=args.theta1,
                                       theta2=default_theta2(n),
                                       exact_iters=args.exact_iters,
                                       target_ratio=c)
                res = coarsen(work, cfg)
                w.writerow([c, repr(res.report.final_ratio),
                            betti(work, 2).beta1])
        finally:
            if fh is not sys.stdout:
                fh.close()
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_stats(args) -> int:
    ds = ingest(args.input)
    g = ds.graph
    print(f"n={g.node_count}")
    print(f"m={g.edge_count}")
    print(f"d_max={g.max_degree()}")
    print(f"d_bar={g.average_degree():.2f}")
    print(f"components={component_count(g)}")
    for k, v in ds.warnings.items():
        if v:
            print(f"warning: {v} {k.replace('_', ' ')} dropped")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.repeat < 1:
        raise ConfigError("--repeat must be >= 1")
    ds = ingest(args.input)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ratio", "final_ratio", "final_nodes", "final_edges",
                    "nodes_removed", "r_final", "wall_time_median", "repeats"])
        for c in args.ratios:
            times = []
            rep = None
            for _ in range(args.repeat):
                g = ds.graph.copy()
                config = _config(args, ds, c)
                t = time.perf_counter()
                rep = coarsen(g, config).report
                times.append(time.perf_counter() - t)
            w.writerow([c, repr(rep.final_ratio), rep.final_nodes, rep.final_edges,
                        rep.original_nodes - rep.final_nodes, rep.r_final,
                        f"{statistics.median(times):.6f}", args.repeat])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


COMMANDS = {"coarsen": cmd_coarsen, "verify": cmd_verify,
            "stats": cmd_stats, "sweep": cmd_sweep}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (IngestError, OSError) as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OracleScaleError as e:
        print(f"oracle scale error: {e}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
