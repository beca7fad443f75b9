"""Command-line surface: solve, kernelize, generate, verify, experiment.

Exit codes: 0 success, 1 malformed input, 2 refused (instance too large),
3 budget exceeded, 5 invalid solution (verify).  Identical arguments and
seed produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from .graphs import (
    GraphError,
    connected_components,
    geodesic_packing_bound,
    is_biclique_union,
)
from .editing import Instance, Mode, sequence_cost, validate_solution
from .covers import CoverError
from .fileio import (
    FileFormatError,
    cover_to_json,
    mode_to_json,
    op_to_json,
    parse_bcg,
    solution_from_json,
    write_bcg,
)
from .generators import (
    CnfError,
    assignment_to_sequence,
    family,
    figure1_graph,
    parse_dimacs_cnf,
    random_planted,
    sat_to_instance,
)
from .kernel import kernelize
from .solvers import (
    BudgetExceeded,
    SolverRefused,
    minimum_bicover,
    oracle_search,
    solve_bcevs,
    solve_bceovs,
)
from .trees import solve_tree

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_REFUSED = 2
EXIT_BUDGET = 3
EXIT_INVALID = 5


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _mode_of(args) -> Mode:
    if args.mode == "bcevs":
        return Mode.bcevs()
    return Mode.bceovs(args.split_side)


def _solve_forest_as_trees(g):
    """Tree mode handles forests by summing per-component tree solves."""
    total = 0
    ops = []
    for comp in connected_components(g):
        sub, vmap = g.induced(comp)
        res = solve_tree(sub)
        total += res.value
        for op in res.witness:
            u = vmap[op.u.origin]
            v = vmap[op.v.origin]
            from .editing import EdgeDelete, copy_of
            ops.append(EdgeDelete(copy_of(u), copy_of(v)))
    return total, ops


def cmd_solve(args) -> int:
    try:
        g = parse_bcg(_read(args.graph))
    except (FileFormatError, GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.perf_counter()
    try:
        if args.mode == "tree":
            value, ops = _solve_forest_as_trees(g)
            payload = {"mode": "tree", "value": value,
                       "operations": [op_to_json(o) for o in ops],
                       "stats": {"elapsed_s": time.perf_counter() - t0}}
        else:
            if args.mode == "bcevs":
                res = solve_bcevs(g, budget=args.budget,
                                  max_vertices=args.max_vertices,
                                  engine=args.engine)
            else:
                res = solve_bceovs(g, budget=args.budget,
                                   split_side=args.split_side,
                                   max_a_classes=args.max_a_classes)
            payload = mode_to_json(res.mode)
            payload.update({
                "value": res.value,
                "operations": [op_to_json(o) for o in res.witness],
                "stats": res.stats,
            })
    except SolverRefused as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write(args.output, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_kernelize(args) -> int:
    try:
        g = parse_bcg(_read(args.graph))
    except (FileFormatError, GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    inst = Instance(g, args.k, Mode.bceovs(args.split_side))
    outcome = kernelize(inst)
    report = dict(outcome.report)
    report["outcome"] = outcome.kind
    if outcome.kind == "trivial_no":
        report["reason"] = outcome.reason
    if outcome.instance is not None and args.out_graph:
        _write(args.out_graph, write_bcg(outcome.instance.graph,
                                         comment=f"kernel output k={args.k}"))
    if outcome.vertex_map is not None:
        report["vertex_map"] = {nv.token(): ov.token()
                                for nv, ov in sorted(outcome.vertex_map.items())}
    _write(args.report, json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        if args.kind == "figure1":
            g = figure1_graph()
            _write(args.output, write_bcg(g, comment="gap example"))
        elif args.kind in ("path", "cycle"):
            (n,) = args.sizes or [None]
            if n is None:
                raise GraphError(f"{args.kind} needs a size")
            g = family(args.kind, n)
            _write(args.output, write_bcg(g, comment=f"{args.kind} {n}"))
        elif args.kind in ("star", "biclique"):
            if len(args.sizes) != 2:
                raise GraphError(f"{args.kind} needs two sizes")
            g = family(args.kind, *args.sizes)
            _write(args.output, write_bcg(g))
        elif args.kind == "sat":
            f = parse_dimacs_cnf(_read(args.cnf))
            inst, rmap = sat_to_instance(f)
            _write(args.output, write_bcg(inst.graph,
                                          comment=f"sat gadget k={inst.k}"))
            if args.map:
                payload = {
                    "k": inst.k,
                    "mode": mode_to_json(inst.mode),
                    "clause_vertices": [v.token()
                                        for v in rmap.clause_vertices],
                    "cycles": {str(v): [r.token() for r in refs]
                               for v, refs in sorted(rmap.cycle_vertices.items())},
                    "literal_positions": {f"{v}@{ci}": pos
                                          for (v, ci), pos
                                          in sorted(rmap.literal_position.items())},
                }
                _write(args.map, json.dumps(payload, indent=2) + "\n")
        elif args.kind == "planted":
            a_parts = [int(x) for x in args.a_parts.split(",")]
            b_parts = [int(x) for x in args.b_parts.split(",")]
            g, cover = random_planted(a_parts, b_parts, args.overlaps,
                                      args.noise, args.seed)
            _write(args.output, write_bcg(g, comment=f"planted seed={args.seed}"))
            if args.map:
                _write(args.map, cover_to_json(cover))
        else:
            raise GraphError(f"unknown generator {args.kind!r}")
    except (GraphError, CnfError, FileFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        g = parse_bcg(_read(args.graph))
        file_mode, ops = solution_from_json(_read(args.solution))
    except (FileFormatError, GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    mode = file_mode if args.mode is None else _mode_of(args)
    if mode is None:
        print("error: no mode in file and none given", file=sys.stderr)
        return EXIT_INPUT
    res = validate_solution(g, ops, mode, exclusive=args.exclusive_splits)
    if res:
        print(f"valid: {sequence_cost(ops)} operations under {mode.describe()}")
        return EXIT_OK
    at = "" if res.failing_index is None else f" at operation {res.failing_index}"
    print(f"invalid: {res.reason}{at}", file=sys.stderr)
    return EXIT_INVALID


def _experiment_rows(args):
    rows = []
    mode_name = args.mode

    def solve_one(name, g, budget=None):
        t0 = time.perf_counter()
        nodes = ""
        kernel_size = ""
        try:
            if mode_name == "tree":
                value, _ = _solve_forest_as_trees(g)
            elif mode_name == "bcevs":
                res = solve_bcevs(g, budget=budget)
                value = res.value
                nodes = res.stats.get("nodes", "")
            else:
                res = solve_bceovs(g, budget=budget)
                value = res.value
                nodes = res.stats.get("nodes", "")
                inst = Instance(g, value, Mode.bceovs("B"))
                out = kernelize(inst)
                if out.kind == "reduced":
                    kernel_size = out.instance.graph.vertex_count
                else:
                    kernel_size = 0
        except (SolverRefused, BudgetExceeded) as exc:
            value = f"[{type(exc).__name__}]"
        wall = time.perf_counter() - t0
        rows.append({
            "instance": name,
            "n": g.vertex_count,
            "m": g.edge_count,
            "k": "" if budget is None else budget,
            "mode": mode_name,
            "value": value,
            "kernel_size": kernel_size,
            "lower_bound": geodesic_packing_bound(g),
            "nodes": nodes,
            "wall_time": f"{wall:.4f}",
        })

    if args.family == "cycles":
        for n in range(args.start, args.stop + 1, args.step):
            solve_one(f"cycle{n}", family("cycle", n), args.budget)
    elif args.family == "paths":
        for n in range(args.start, args.stop + 1, args.step):
            solve_one(f"path{n}", family("path", n), args.budget)
    elif args.family == "planted":
        rng_seeds = range(args.seed, args.seed + args.count)
        for s in rng_seeds:
            g, cover = random_planted([2, 2], [2, 2], 1, 1, s)
            solve_one(f"planted{s}", g, args.budget)
    elif args.family == "trees":
        import itertools
        try:
            import networkx as nx
        except ImportError:
            raise GraphError("the trees family needs networkx")
        from .graphs import build_graph
        idx = 0
        for n in range(2, args.stop + 1):
            for t in nx.nonisomorphic_trees(n):
                color = nx.bipartite.color(t)
                a_nodes = sorted(v for v in t if color[v] == 0)
                b_nodes = sorted(v for v in t if color[v] == 1)
                ai = {v: i for i, v in enumerate(a_nodes)}
                bi = {v: i for i, v in enumerate(b_nodes)}
                edges = []
                for u, v in t.edges():
                    if color[u] == 1:
                        u, v = v, u
                    edges.append((ai[u], bi[v]))
                g = build_graph(len(a_nodes), len(b_nodes), edges)
                solve_one(f"tree{n}_{idx}", g, args.budget)
                idx += 1
    else:
        raise GraphError(f"unknown family {args.family!r}")
    return rows


def cmd_experiment(args) -> int:
    try:
        rows = _experiment_rows(args)
    except (GraphError, SolverRefused) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=[
        "instance", "n", "m", "k", "mode", "value", "kernel_size",
        "lower_bound", "nodes", "wall_time"])
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    _write(args.output, buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bcvsplit",
        description="Exact bicluster editing with vertex splitting")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve an instance exactly")
    ps.add_argument("graph", help="bcg file ('-' for stdin)")
    ps.add_argument("--mode", choices=["bcevs", "bceovs", "tree"],
                    default="bcevs")
    ps.add_argument("--split-side", choices=["A", "B"], default="B")
    ps.add_argument("--budget", type=int, default=None)
    ps.add_argument("--max-vertices", type=int, default=14)
    ps.add_argument("--max-a-classes", type=int, default=12)
    ps.add_argument("--engine", choices=["auto", "enumerate", "bicover"],
                    default="auto")
    ps.add_argument("--output", "-o", default=None)
    ps.set_defaults(func=cmd_solve)

    pk = sub.add_parser("kernelize", help="kernelize a one-sided instance")
    pk.add_argument("graph")
    pk.add_argument("--k", type=int, required=True)
    pk.add_argument("--split-side", choices=["A", "B"], default="B")
    pk.add_argument("--out-graph", default=None,
                    help="file for the reduced/certificate graph")
    pk.add_argument("--report", default=None, help="report JSON destination")
    pk.set_defaults(func=cmd_kernelize)

    pg = sub.add_parser("generate", help="emit instance files")
    pg.add_argument("kind", choices=["path", "cycle", "star", "biclique",
                                     "figure1", "sat", "planted"])
    pg.add_argument("sizes", nargs="*", type=int)
    pg.add_argument("--cnf", default=None, help="DIMACS input for sat")
    pg.add_argument("--a-parts", default="2,2")
    pg.add_argument("--b-parts", default="2,2")
    pg.add_argument("--overlaps", type=int, default=0)
    pg.add_argument("--noise", type=int, default=0)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--map", default=None,
                    help="provenance/cover JSON destination")
    pg.add_argument("--output", "-o", default=None)
    pg.set_defaults(func=cmd_generate)

    pv = sub.add_parser("verify", help="check a solution file")
    pv.add_argument("graph")
    pv.add_argument("solution")
    pv.add_argument("--mode", choices=["bcevs", "bceovs"], default=None)
    pv.add_argument("--split-side", choices=["A", "B"], default="B")
    pv.add_argument("--exclusive-splits", action="store_true")
    pv.set_defaults(func=cmd_verify)

    pe = sub.add_parser("experiment", help="sweep a family, emit CSV")
    pe.add_argument("--family", choices=["cycles", "paths", "planted",
                                         "trees"], required=True)
    pe.add_argument("--start", type=int, default=6)
    pe.add_argument("--stop", type=int, default=12)
    pe.add_argument("--step", type=int, default=2)
    pe.add_argument("--count", type=int, default=5)
    pe.add_argument("--seed", type=int, default=0)
    pe.add_argument("--budget", type=int, default=None)
    pe.add_argument("--mode", choices=["bcevs", "bceovs", "tree"],
                    default="bcevs")
    pe.add_argument("--output", "-o", default=None)
    pe.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
