"""Batch command-line interface: the scriptable twin of the HTTP service.

Exit codes: 0 success, 1 runtime error, 2 usage error, 3 guard refusal.
Every subcommand is deterministic given its flags (including --seed), so
output files from identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .centrality import MEASURES, compute_report, top_central
from .graph import UnknownNodeError
from .ingest import (
    IngestError,
    SnapshotError,
    build_dataset,
    load_snapshot,
    parse_corpus,
    parse_dynasties,
    save_snapshot,
)
from .partition import Algorithm, PartitionError, PartitionRequest, SizeGuardError
from .report import (
    centrality_row_dict,
    fmt,
    pair_relationship,
    pair_to_dict,
    partition_to_dict,
    report_to_dict,
    three_part_report,
)
from .stats import degree_histogram, network_summary, sign_counts
from .subgraph import DEFAULT_DEPTH_CAP, DepthCapError, SeedQuery, ball_sizes, extract_subgraph
from .ingest import dataset_to_dict

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


def _ids(text: str) -> List[int]:
    try:
        out = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("expected at least one id")
    return out


def _write_json(payload, path: Optional[str]) -> None:
    text = json.dumps(payload, ensure_ascii=False, indent=1) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _print_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> None:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    for r, row in enumerate(cells):
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if r == 0:
            print("  ".join("-" * w for w in widths))


def _add_partition_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algorithm", required=True,
                   choices=[a.value for a in Algorithm], help="partition strategy")
    p.add_argument("--groups", type=int, help="group count (greedy l / spectral k / brute cap)")
    p.add_argument("--restarts", type=int, default=16, help="greedy restarts (default 16)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--gamma-pos", type=float, default=1.0,
                   help="positive-layer resolution (community)")
    p.add_argument("--gamma-neg", type=float, default=1.0,
                   help="negative-layer resolution (community)")
    p.add_argument("--dim", type=int, default=8, help="spectral embedding dimension")


def _partition_request(args) -> PartitionRequest:
    return PartitionRequest(
        algorithm=Algorithm(args.algorithm),
        seed=args.seed,
        groups=args.groups,
        restarts=args.restarts,
        gamma_pos=args.gamma_pos,
        gamma_neg=args.gamma_neg,
        dim=args.dim,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="campnet",
        description="Signed social network analysis of historical biographical corpora.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse corpus files and write a graph snapshot")
    p.add_argument("--persons", required=True, help="persons.tsv path")
    p.add_argument("--relations", required=True, help="relations.tsv path")
    p.add_argument("--rules", required=True, help="sign_rules.tsv path")
    p.add_argument("--dynasties", help="dynasties.tsv path (default: packaged table)")
    p.add_argument("--dynasty", help="keep only people of this dynasty")
    p.add_argument("--exclude-ids", type=_ids, default=[],
                   help="comma-separated person ids to drop (e.g. placeholder 9999)")
    p.add_argument("--out", required=True, help="snapshot output path")

    p = sub.add_parser("stats", help="network statistics table and degree histogram")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--weighted-clustering", action="store_true",
                   help="use the weighted clustering generalization")
    p.add_argument("--degree-hist", default="degree_hist.csv",
                   help="degree histogram CSV output (default degree_hist.csv)")
    p.add_argument("--json", dest="json_out", help="also write the table as JSON")

    p = sub.add_parser("central", help="top-k people by a centrality measure")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--top", type=int, default=15)
    p.add_argument("--order-by", default="degree", choices=list(MEASURES))
    p.add_argument("--json", dest="json_out", help="write rows as JSON")

    p = sub.add_parser("extract", help="extract the d-hop subgraph around seed people")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--seeds", type=_ids, required=True, help="comma-separated person ids")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--max-depth", type=int, default=DEFAULT_DEPTH_CAP,
                   help=f"depth guard override (default {DEFAULT_DEPTH_CAP})")
    p.add_argument("--out", required=True, help="subgraph snapshot output path")

    p = sub.add_parser("pair", help="relationship evidence between two people")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--json", dest="json_out", help="write the report as JSON")

    p = sub.add_parser("partition", help="partition the snapshot graph into camps")
    p.add_argument("--snapshot", required=True)
    _add_partition_flags(p)
    p.add_argument("--json", dest="json_out", help="write the partition as JSON")

    p = sub.add_parser("report", help="three-part report for a seed query")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--seeds", type=_ids, required=True)
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--max-depth", type=int, default=DEFAULT_DEPTH_CAP)
    _add_partition_flags(p)
    p.add_argument("--top", type=int, default=15)
    p.add_argument("--order-by", default="degree", choices=list(MEASURES))
    p.add_argument("--out", required=True, help="report JSON output path")

    p = sub.add_parser("serve", help="serve the snapshot over HTTP")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--node-cap", type=int, default=2000,
                   help="per-request subgraph node cap (default 2000)")
    p.add_argument("--workers", type=int, default=4, help="analysis worker threads")
    p.add_argument("--max-depth", type=int, default=DEFAULT_DEPTH_CAP)
    p.add_argument("--ui", help="serve this directory as the explorer UI")
    return parser


# -- subcommand bodies ------------------------------------------------------------


def cmd_ingest(args) -> int:
    persons, relations, rules, summaries = parse_corpus(
        args.persons, args.relations, args.rules)
    spans = None
    if args.dynasties:
        spans, _ = parse_dynasties(args.dynasties)
    ds = build_dataset(persons, relations, rules, dynasty=args.dynasty,
                       spans=spans, exclude_ids=args.exclude_ids)
    save_snapshot(ds, args.out)
    for s in summaries:
        print(f"{s.path}: read {s.rows_read}, kept {s.rows_kept}, dropped {s.rows_dropped}"
              + (f", self-loops {s.self_loops_dropped}" if s.self_loops_dropped else ""))
        for w in s.warnings:
            print(f"  warning: {w}")
    b = ds.build
    print(f"persons kept: {b.persons_kept}/{b.persons_total}"
          + (f" (dynasty {args.dynasty})" if args.dynasty else ""))
    if b.missing_endpoint_dropped:
        print(f"relations dropped with missing endpoint: {b.missing_endpoint_dropped}")
    if b.unmapped_codes:
        print(f"unmapped codes treated as neutral: {', '.join(b.unmapped_codes)}")
    print(f"snapshot written to {args.out}: |V|={ds.graph.node_count()} "
          f"|E|={ds.graph.edge_count()}")
    return EXIT_OK


def cmd_stats(args) -> int:
    ds = load_snapshot(args.snapshot)
    row = network_summary(ds.graph, name=ds.dynasty or "corpus",
                          weighted_clustering=args.weighted_clustering)
    _print_table(
        ["name", "|V|", "|E|", "avg_clustering", "avg_path_length", "components",
         "isolated"],
        [[row.name, row.node_count, row.edge_count,
          f"{row.average_clustering:.6f}", f"{row.average_path_length:.6f}",
          row.components, row.isolated_nodes]])
    counts = sign_counts(ds.graph)
    print(f"edge signs: +{counts['positive']} -{counts['negative']} 0{counts['neutral']}")
    print("note: path length averages over mutually reachable ordered pairs; "
          "isolated vertices are kept")
    hist = degree_histogram(ds.graph)
    Path(args.degree_hist).write_text(
        "degree,count\n" + "".join(f"{d},{c}\n" for d, c in hist), encoding="utf-8")
    print(f"degree histogram written to {args.degree_hist}")
    if args.json_out:
        _write_json({
            "name": row.name, "node_count": row.node_count,
            "edge_count": row.edge_count,
            "average_clustering": fmt(row.average_clustering),
            "average_path_length": fmt(row.average_path_length),
            "reachable_pairs": row.reachable_pairs, "components": row.components,
            "isolated_nodes": row.isolated_nodes, "sign_counts": counts,
        }, args.json_out)
    return EXIT_OK


def cmd_central(args) -> int:
    ds = load_snapshot(args.snapshot)
    report = compute_report(ds.graph)
    rows = top_central(report, args.top, args.order_by)
    table = [[ds.display_name(r.node), r.node, f"{r.degree:.6f}", f"{r.betweenness:.6f}",
              f"{r.closeness:.6f}", f"{r.eigenvector:.6f}"] for r in rows]
    _print_table(["name", "person_id", "degree", "betweenness", "closeness",
                  "eigenvector"], table)
    if not report.eigenvector_converged:
        print("warning: eigenvector power iteration did not converge")
    if args.json_out:
        _write_json({
            "order_by": args.order_by,
            "eigenvector_converged": report.eigenvector_converged,
            "rows": [centrality_row_dict(r, ds.display_name(r.node)) for r in rows],
        }, args.json_out)
    return EXIT_OK


def cmd_extract(args) -> int:
    ds = load_snapshot(args.snapshot)
    query = SeedQuery(tuple(args.seeds), args.depth)
    sub = extract_subgraph(ds.graph, query, max_depth=args.max_depth)
    save_snapshot(ds.restrict(sub.nodes), args.out)
    sizes = ball_sizes(ds.graph, query, max_depth=args.max_depth)
    print(f"ball sizes by round: {sizes}")
    print(f"subgraph written to {args.out}: |V|={sub.node_count()} |E|={sub.edge_count()}")
    return EXIT_OK


def cmd_pair(args) -> int:
    ds = load_snapshot(args.snapshot)
    rep = pair_relationship(ds, args.u, args.v)
    print(f"{rep.u_name} ({rep.u}) -- {rep.v_name} ({rep.v})")
    if rep.records:
        _print_table(["rel_code", "rel_name", "sign", "count"],
                     [[r.rel_code, r.rel_name, r.sign.value, r.count] for r in rep.records])
    else:
        print("no recorded relationship")
    print(f"totals: +{rep.pos_total} -{rep.neg_total} 0{rep.neu_total} "
          f"=> net {rep.net_sign.value}")
    if args.json_out:
        _write_json(pair_to_dict(rep), args.json_out)
    return EXIT_OK


def cmd_partition(args) -> int:
    ds = load_snapshot(args.snapshot)
    result = _partition_request(args).run(ds.graph)
    for i, group in enumerate(result.groups()):
        names = ", ".join(f"{ds.display_name(v)} ({v})" for v in group)
        print(f"group {i}: {names}")
    print(f"imbalance I(P) = {result.imbalance:g}; objective {result.objective.value} "
          f"score = {result.score:.6f}")
    if args.json_out:
        _write_json(partition_to_dict(result), args.json_out)
    return EXIT_OK


def cmd_report(args) -> int:
    ds = load_snapshot(args.snapshot)
    rep = three_part_report(ds, SeedQuery(tuple(args.seeds), args.depth),
                            _partition_request(args), top=args.top,
                            order_by=args.order_by, max_depth=args.max_depth)
    _write_json(report_to_dict(rep), args.out)
    print(f"subgraph: |V|={rep.subgraph_nodes} |E|={rep.subgraph_edges}")
    for i, group in enumerate(rep.partition.groups()):
        names = ", ".join(rep.names[v] for v in group)
        print(f"group {i}: {names}")
    print(f"imbalance I(P) = {rep.partition.imbalance:g}")
    print(f"report written to {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve

    serve(args.snapshot, host=args.host, port=args.port, node_cap=args.node_cap,
          workers=args.workers, max_depth=args.max_depth, ui_dir=args.ui)
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "stats": cmd_stats,
    "central": cmd_central,
    "extract": cmd_extract,
    "pair": cmd_pair,
    "partition": cmd_partition,
    "report": cmd_report,
    "serve": cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (DepthCapError, SizeGuardError) as exc:
        print(f"error: guard refusal: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (IngestError, SnapshotError, UnknownNodeError, PartitionError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
