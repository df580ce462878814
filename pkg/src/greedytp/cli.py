"""Command-line interface: decompose, width, game, answer, check, gen.

Exit codes: 0 success or true decision, 1 false decision (no projection, no
win, empty search), 2 usage or input errors, 3 internal validation failures.
Stdout carries data and is byte-identical across repeated runs; diagnostics
go to stderr via logging.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import (BudgetError, GreedyTpError, InputError, NoTreeProjection,
                     ParseError, ValidationError)
from .game import (component_graph, extract_strategy, greedy_bound,
                   greedy_wins, make_nice, marshal_monotone_wins)
from .hypergraph import (Hypergraph, format_hypergraph, is_acyclic,
                         parse_hypergraph)
from .methods import DEFAULT_EDGE_BUDGET, width_search
from .monotonize import extract_tree_projection, monotonize
from .oracle import (InstanceSpec, generate, naive_join,
                     tp_exists_bruteforce, tp_exists_coversearch)
from .query import answer, format_rows, load_database, parse_query

log = logging.getLogger(__name__)

_MAX_PLOT_NODES = 400


def _read_hg(path: str) -> Hypergraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc))
    return parse_hypergraph(text)


def _emit_json(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _ensure_dir(path: str) -> Path:
    d = Path(path)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _plot_pair_report(out: Path, h1, h2, tp, cg_before, cg_after) -> None:
    from . import plotting
    if h1.n_nodes <= _MAX_PLOT_NODES:
        plotting.plot_hypergraph(h1, out / "h1.png", "H1")
        plotting.plot_hypergraph(h2, out / "h2.png", "H2")
    if tp is not None:
        plotting.plot_hypergraph(tp.ha, out / "projection.png",
                                 "tree projection")
        plotting.plot_join_tree(tp.ha, tp.jt, out / "jointree.png",
                                "join tree")
    for cg, name in ((cg_before, "component_before.png"),
                     (cg_after, "component_after.png")):
        if cg is not None and len(cg.nodes) <= _MAX_PLOT_NODES:
            plotting.plot_component_graph(cg, out / name)


def _write_tp_files(out: Path, tp, h1, h2) -> None:
    (out / "projection.hg").write_text(format_hypergraph(tp.ha),
                                       encoding="utf-8")
    with (out / "jointree.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for e, p in enumerate(tp.jt.parent):
            w.writerow([tp.ha.edge_names[e],
                        "" if p is None else tp.ha.edge_names[p]])
    with (out / "lower.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for i, j in enumerate(tp.lower):
            w.writerow([h1.edge_names[i], tp.ha.edge_names[j]])
    with (out / "upper.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for i, j in enumerate(tp.upper):
            w.writerow([tp.ha.edge_names[i], h2.edge_names[j]])


def cmd_decompose(args) -> int:
    h1 = _read_hg(args.h1)
    h2 = _read_hg(args.h2)
    won, gg = greedy_wins(h1, h2)
    if not won:
        if args.json:
            _emit_json({"won": False})
        else:
            print("no greedy winning strategy", file=sys.stderr)
        return 1
    sg = make_nice(extract_strategy(gg))
    cg = component_graph(sg)
    mono = monotonize(cg, h1, h2)
    tp = extract_tree_projection(mono, h1, h2)
    if args.json:
        _emit_json({
            "won": True,
            "projection": format_hypergraph(tp.ha),
            "join_tree": {tp.ha.edge_names[e]:
                          None if p is None else tp.ha.edge_names[p]
                          for e, p in enumerate(tp.jt.parent)},
            "lower": {h1.edge_names[i]: tp.ha.edge_names[j]
                      for i, j in enumerate(tp.lower)},
            "upper": {tp.ha.edge_names[i]: h2.edge_names[j]
                      for i, j in enumerate(tp.upper)},
            "rewrites": mono.rewrites,
        })
    else:
        print(tp.serialize(), end="")
    if args.out:
        out = _ensure_dir(args.out)
        _write_tp_files(out, tp, h1, h2)
        _plot_pair_report(out, h1, h2, tp, cg, mono)
        log.info("report written to %s", out)
    return 0


def cmd_width(args) -> int:
    h = _read_hg(args.hypergraph)
    report = width_search(h, args.method, args.kmax, args.budget_edges)
    if args.json:
        _emit_json(report.to_json_dict(timings=args.timings))
    else:
        print(report.to_text(timings=args.timings))
    if args.out:
        out = _ensure_dir(args.out)
        (out / "report.json").write_text(
            json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
        if report.certificate is not None:
            _write_tp_files(out, report.certificate, h,
                            report._views if report._views is not None else h)
            from . import plotting
            plotting.plot_hypergraph(h, out / "input.png", "input")
            plotting.plot_hypergraph(report.certificate.ha,
                                     out / "projection.png", "certificate")
            plotting.plot_join_tree(report.certificate.ha,
                                    report.certificate.jt,
                                    out / "jointree.png", "join tree")
    return 0 if report.width is not None else 1


def cmd_game(args) -> int:
    h1 = _read_hg(args.h1)
    h2 = _read_hg(args.h2)
    if args.monotone:
        won, gg = marshal_monotone_wins(h1, h2)
        kind = "monotone marshal"
    else:
        won, gg = greedy_wins(h1, h2)
        kind = "greedy Captain"
    print("%s %s (%d positions, %d moves, bound %d)"
          % (kind, "wins" if won else "loses", gg.n_states, gg.n_moves,
             greedy_bound(h1, h2)))
    if not won:
        return 1
    sg = extract_strategy(gg)
    nice = make_nice(sg)
    cg = component_graph(nice)
    steps: list[str] = []
    mono = monotonize(cg, h1, h2, trace=steps)
    tp = extract_tree_projection(mono, h1, h2)
    print("strategy: %d configurations; component graph: %d -> %d nodes, "
          "%d rewrites" % (sg.n_configs, len(cg.nodes), len(mono.nodes),
                           mono.rewrites))
    print("projection: %d hyperedges, acyclic=%s"
          % (tp.ha.n_edges, is_acyclic(tp.ha)))
    if args.trace:
        print("=== strategy ===")
        for line in sg.trace_lines():
            print(line)
        print("=== nice strategy ===")
        for line in nice.trace_lines():
            print(line)
        print("=== component graph (before monotonization) ===")
        for line in cg.trace_lines():
            print(line)
        print("=== monotonization (escape doors) ===")
        for line in steps:
            print(line)
        if not steps:
            print("already monotone")
        print("=== component graph (monotone) ===")
        for line in mono.trace_lines():
            print(line)
    if args.out:
        out = _ensure_dir(args.out)
        (out / "strategy.dot").write_text(sg.to_dot() + "\n",
                                          encoding="utf-8")
        (out / "component_before.dot").write_text(cg.to_dot() + "\n",
                                                  encoding="utf-8")
        (out / "component_after.dot").write_text(
            mono.to_dot("monotone component graph") + "\n", encoding="utf-8")
        trace_text = "\n".join(steps) + ("\n" if steps else "")
        (out / "rewrites.txt").write_text(trace_text, encoding="utf-8")
        _write_tp_files(out, tp, h1, h2)
        _plot_pair_report(out, h1, h2, tp, cg, mono)
        from . import plotting
        if sg.n_configs <= _MAX_PLOT_NODES:
            plotting.plot_strategy(sg, out / "strategy.png", "strategy")
    return 0


def cmd_answer(args) -> int:
    try:
        text = Path(args.query).read_text(encoding="utf-8") \
            if args.query != "-" else sys.stdin.read()
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (args.query, exc))
    q = parse_query(text)
    db = load_database(args.database)
    if args.naive:
        rows = naive_join(q, db, budget_rows=args.budget_rows)
        stats = None
    else:
        rows, stats = answer(q, db, kmax=args.kmax, method=args.method,
                             budget_edges=args.budget_edges,
                             budget_rows=args.budget_rows)
    if args.json:
        doc = {"head": list(q.head_vars),
               "rows": sorted(list(r) for r in rows)}
        if not q.head_vars:
            doc["boolean"] = bool(rows)
        if stats is not None:
            doc["stats"] = stats.to_json_dict(timings=args.timings)
        _emit_json(doc)
        return 0
    if stats is not None:
        log.info("stats: m=%d r=%d r'=%d s=%d",
                 stats.m, stats.r, stats.r_prime, stats.s)
    if not q.head_vars:
        out_text = "true\n" if rows else "false\n"
    else:
        out_text = format_rows(rows, q.head_vars)
    if args.out and args.out != "-":
        Path(args.out).write_text(out_text, encoding="utf-8")
    else:
        sys.stdout.write(out_text)
    return 0


_CHECK_MODES = (
    ("cover", InstanceSpec(seed=0, mode="cover", nodes=8, edges=6,
                           max_arity=4, min_arity=2)),
    ("power-1", InstanceSpec(seed=0, mode="power", k=1, nodes=8, edges=6,
                             max_arity=4, min_arity=2)),
    ("power-2", InstanceSpec(seed=0, mode="power", k=2, nodes=8, edges=4,
                             max_arity=3, min_arity=2)),
    ("power-3", InstanceSpec(seed=0, mode="power", k=3, nodes=8, edges=3,
                             max_arity=2, min_arity=2)),
)


def run_differential(seed: int, count: int):
    """The cross-checks behind `check --diff`; returns per-mode tallies."""
    from dataclasses import replace

    from .methods import simplicial
    from .monotonize import validate_tree_projection
    table = {name: {"count": 0, "wins": 0, "failures": []}
             for name, _ in _CHECK_MODES}
    for s in range(seed, seed + count):
        name, base = _CHECK_MODES[s % len(_CHECK_MODES)]
        row = table[name]
        row["count"] += 1
        try:
            h1, h2 = generate(replace(base, seed=s))
            truth = tp_exists_bruteforce(h1, h2)
            if truth != tp_exists_coversearch(h1, h2):
                raise ValidationError("independent oracles disagree")
            free, _ = greedy_wins(h1, simplicial(h2))
            if truth != free:
                raise ValidationError("greedy-vs-oracle equivalence broken")
            won, gg = greedy_wins(h1, h2)
            mono_won, _ = marshal_monotone_wins(h1, h2)
            if mono_won and not won:
                raise ValidationError("marshal won but greedy lost")
            if won and not truth:
                raise ValidationError("greedy won but no projection exists")
            if won:
                sg = make_nice(extract_strategy(gg))
                mono = monotonize(component_graph(sg), h1, h2)
                tp = extract_tree_projection(mono, h1, h2)
                ok, diags = validate_tree_projection(tp, h1, h2)
                if not ok:
                    raise ValidationError("; ".join(diags))
                row["wins"] += 1
        except GreedyTpError as exc:
            row["failures"].append({"seed": s, "error": str(exc)})
    return table


def cmd_check(args) -> int:
    if not args.diff:
        raise InputError("nothing to do: pass --diff")
    table = run_differential(args.seed, args.count)
    failures = sum(len(r["failures"]) for r in table.values())
    if args.json:
        _emit_json({"seed": args.seed, "count": args.count,
                    "modes": table, "failures": failures})
    else:
        print("%-10s %8s %8s %8s" % ("mode", "count", "wins", "failures"))
        for name, row in table.items():
            print("%-10s %8d %8d %8d"
                  % (name, row["count"], row["wins"], len(row["failures"])))
            for f in row["failures"]:
                print("  seed %d: %s" % (f["seed"], f["error"]))
        print("PASS" if failures == 0 else "FAIL")
    return 0 if failures == 0 else 3


def cmd_gen(args) -> int:
    spec = InstanceSpec(seed=args.seed, mode=args.mode, nodes=args.nodes,
                        edges=args.edges, max_arity=args.arity,
                        min_arity=args.min_arity, k=args.k,
                        edges2=args.edges2, rows=args.rows,
                        domain=args.domain)
    from dataclasses import replace
    for s in range(args.seed, args.seed + args.count):
        inst = generate(replace(spec, seed=s))
        if args.mode == "query":
            if not args.out:
                raise InputError("query mode needs --out DIR")
            out = _ensure_dir(args.out) / ("seed%d" % s)
            out.mkdir(exist_ok=True)
            q, db = inst
            from .oracle import Q0_TEXT
            (out / "query.txt").write_text(Q0_TEXT + "\n", encoding="utf-8")
            dbdir = out / "db"
            dbdir.mkdir(exist_ok=True)
            for rel in db.values():
                with (dbdir / ("%s.csv" % rel.name)).open(
                        "w", newline="", encoding="utf-8") as fh:
                    w = csv.writer(fh, lineterminator="\n")
                    for row in sorted(rel.rows):
                        w.writerow(row)
        else:
            h1, h2 = inst
            if args.out:
                out = _ensure_dir(args.out)
                (out / ("seed%d_h1.hg" % s)).write_text(
                    format_hypergraph(h1), encoding="utf-8")
                (out / ("seed%d_h2.hg" % s)).write_text(
                    format_hypergraph(h2), encoding="utf-8")
            else:
                print("%% seed %d h1" % s)
                print(format_hypergraph(h1), end="")
                print("%% seed %d h2" % s)
                print(format_hypergraph(h2), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="greedytp",
        description="Greedy tree projections: decompositions, width "
                    "measures, capture games and query answering.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-v", "--verbose", action="count", default=0)
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")

    p = sub.add_parser("decompose", help="extract a tree projection")
    common(p)
    p.add_argument("h1")
    p.add_argument("h2")
    p.add_argument("--out", help="report directory (files + figures)")

    p = sub.add_parser("width", help="decide a width measure")
    common(p)
    p.add_argument("hypergraph")
    p.add_argument("--method", default="grhw",
                   choices=("grhw", "ghw", "hw", "tw"))
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--budget-edges", type=int, default=DEFAULT_EDGE_BUDGET)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--out", help="report directory (files + figures)")

    p = sub.add_parser("game", help="play the capture game on a pair")
    common(p)
    p.add_argument("h1")
    p.add_argument("h2")
    p.add_argument("--monotone", action="store_true",
                   help="restrict the Captain to monotone marshal play")
    p.add_argument("--trace", action="store_true",
                   help="dump strategies and rewrites, labeling escape doors")
    p.add_argument("--out", help="report directory (dot, files, figures)")

    p = sub.add_parser("answer", help="answer a conjunctive query")
    common(p)
    p.add_argument("query", help="query file, or - for stdin")
    p.add_argument("database", help="directory of <relation>.csv files")
    p.add_argument("--kmax", type=int, default=2)
    p.add_argument("--method", default="grhw", choices=("grhw", "ghw", "hw"))
    p.add_argument("--naive", action="store_true",
                   help="skip decomposition, evaluate by brute force")
    p.add_argument("--budget-edges", type=int, default=DEFAULT_EDGE_BUDGET)
    p.add_argument("--budget-rows", type=int, default=5_000_000)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--out", help="answer CSV path (default stdout)")

    p = sub.add_parser("check", help="differential test against the oracles")
    common(p)
    p.add_argument("--diff", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)

    p = sub.add_parser("gen", help="emit reproducible random instances")
    common(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", default="cover",
                   choices=("power", "cover", "query"))
    p.add_argument("--nodes", type=int, default=8)
    p.add_argument("--edges", type=int, default=6)
    p.add_argument("--arity", type=int, default=4)
    p.add_argument("--min-arity", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--edges2", type=int, default=12)
    p.add_argument("--rows", type=int, default=50)
    p.add_argument("--domain", type=int, default=8)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", help="output directory")
    return ap


_COMMANDS = {
    "decompose": cmd_decompose,
    "width": cmd_width,
    "game": cmd_game,
    "answer": cmd_answer,
    "check": cmd_check,
    "gen": cmd_gen,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[
        min(args.verbose, 2)]
    logging.basicConfig(level=level,
                        format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    try:
        return _COMMANDS[args.command](args)
    except NoTreeProjection as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ParseError, InputError, BudgetError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValidationError as exc:
        print("internal validation failure: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
