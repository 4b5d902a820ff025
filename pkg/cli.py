"""
TEMPO Route - Command Line
==========================
    python cli.py route      --graph FILE --source N [--target N] --t0 T --algo ALGO
    python cli.py check-fifo --graph FILE [--edge ID]
    python cli.py expand     --graph FILE --source N --t0 T [--allow-wait] [--dot]
    python cli.py bench      --suite {random-fifo|pseudo-poly} [--sizes ...] [--seed S]

--graph takes a corpus instance name (fig1, fig1-fifo, fig3-k4, triangle),
a shipped graph under data/, or a path. For corpus instances a missing
--target is the instance's target, and --source/--t0 default to the
instance's query when --source is omitted.

Exit codes: 0 ok, 1 usage / input error, 2 unreachable, 3 non-FIFO edge,
4 truncated expansion.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from modules.benchmark import (
    export_excel, run_pseudo_poly_suite, run_random_fifo_suite, state_count_fit
)
from modules.errors import RoutingError
from modules.graph_core import check_fifo
from modules.graph_io import load_graph, load_static_graph, render_document
from modules.oracle_corpus import corpus_by_name
from modules.query_runner import run_query
from modules.routing_td import TdQuery
from modules.state_graph import ExpandOptions, expand, export_dot
from utils.constants import (
    ALGORITHMS, APP_NAME, APP_VERSION, BENCH_DEFAULT_SEED, BENCH_DEFAULT_SIZES,
    BENCH_INSTANCES_PER_SIZE, BENCH_SUITES, DEFAULT_MAX_STATES, EXIT_NON_FIFO, EXIT_OK,
    EXIT_TRUNCATED, EXIT_UNREACHABLE, EXIT_USAGE, TARGET_REQUIRED
)
from utils.helpers import get_log_level

logger = logging.getLogger("tempo.cli")

STATUS_EXIT_CODES = {
    "ok": EXIT_OK,
    "unreachable": EXIT_UNREACHABLE,
    "non_fifo": EXIT_NON_FIFO,
    "truncated": EXIT_TRUNCATED,
}


class UsageError(Exception):
    pass


def _resolve_node(g, token) -> int:
    """Node name or integer id, for Graph and StaticGraph alike."""
    token = str(token)
    if token in g.names:
        return g.names.index(token)
    try:
        node = int(token)
    except ValueError:
        raise UsageError(f"unknown node {token!r}")
    if not 0 <= node < g.node_count:
        raise UsageError(f"node {node} outside 0..{g.node_count - 1}")
    return node


def _corpus_query(graph_token: str) -> Optional[TdQuery]:
    instance = corpus_by_name().get(graph_token)
    return instance.query if instance else None


def _query(g, args, need_target: bool = False) -> TdQuery:
    """
    Build the query from flags. On corpus instances a missing --target
    always falls back to the instance's target; --source and --t0 fall back
    to the instance's query only when --source is omitted.
    """
    default = _corpus_query(args.graph)
    if args.source is None and default is None:
        raise UsageError("--source is required for graph files")

    if args.source is not None:
        source = _resolve_node(g, args.source)
        t0 = args.t0 if args.t0 is not None else 0
    else:
        source = default.source
        t0 = args.t0 if args.t0 is not None else default.t0
    if args.target is not None:
        target = _resolve_node(g, args.target)
    else:
        target = default.target if default else None
    if t0 < 0:
        raise UsageError(f"--t0 {t0} must be non-negative")
    if need_target and target is None:
        raise UsageError("this command needs --target")
    return TdQuery(source, target, t0)


def _expand_options(args, target=None) -> ExpandOptions:
    try:
        return ExpandOptions(allow_wait=args.allow_wait, horizon=args.horizon,
                             max_states=args.max_states, target=target)
    except ValueError as e:
        raise UsageError(str(e))


# ============================================================================
# route
# ============================================================================

def cmd_route(args) -> int:
    family = ALGORITHMS[args.algo]["family"]
    if args.allow_wait and args.algo != "state-graph":
        raise UsageError("--allow-wait is only supported by --algo state-graph")

    if family == "static":
        default = _corpus_query(args.graph)
        t0 = args.t0 if args.t0 is not None else (default.t0 if default and args.source is None else 0)
        g = load_static_graph(args.graph, at=t0)
    else:
        g, _ = load_graph(args.graph)
    q = _query(g, args, need_target=args.algo in TARGET_REQUIRED)

    doc, _ = run_query(g, q, args.algo, _expand_options(args))
    sys.stdout.write(render_document(doc))
    return STATUS_EXIT_CODES.get(doc['status'], EXIT_USAGE)


# ============================================================================
# check-fifo
# ============================================================================

def cmd_check_fifo(args) -> int:
    g, _ = load_graph(args.graph)
    if args.edge is not None:
        if not 0 <= args.edge < len(g.edges):
            raise UsageError(f"edge {args.edge} outside 0..{len(g.edges) - 1}")
        edge_ids = [args.edge]
    else:
        edge_ids = list(range(len(g.edges)))

    violations = 0
    for eid in edge_ids:
        report = check_fifo(g.edges[eid].cost)
        if report.is_fifo:
            print(f"edge {eid} {g.edge_label(eid)}: FIFO")
        else:
            w = report.witness
            violations += 1
            print(f"edge {eid} {g.edge_label(eid)}: NON-FIFO "
                  f"witness t1={w.t1} t2={w.t2} a1={w.a1} a2={w.a2}")
    print(f"# checked={len(edge_ids)} non_fifo={violations}")
    return EXIT_NON_FIFO if violations else EXIT_OK


# ============================================================================
# expand
# ============================================================================

def cmd_expand(args) -> int:
    g, _ = load_graph(args.graph)
    q = _query(g, args)
    sg = expand(g, q.source, q.t0, _expand_options(args, target=q.target))

    stats = sg.stats
    summary = (f"states={stats.state_count} transitions={stats.transition_count} "
               f"truncated={str(stats.truncated).lower()} horizon={stats.horizon}")
    if args.dot:
        sys.stdout.write(export_dot(sg))
        print(f"// {summary}")
    else:
        for state in sg.states:
            print(sg.label(state))
        print(f"# {summary}")
    return EXIT_TRUNCATED if stats.truncated else EXIT_OK


# ============================================================================
# bench
# ============================================================================

def cmd_bench(args) -> int:
    if args.sizes is not None and not args.sizes:
        raise UsageError("--sizes needs at least one value")
    sizes = args.sizes or BENCH_DEFAULT_SIZES[args.suite]
    if any(size < 1 for size in sizes):
        raise UsageError("--sizes must be positive")

    pseudo_poly = random_fifo = None
    if args.suite == "pseudo-poly":
        pseudo_poly = run_pseudo_poly_suite(sizes)
        print(pseudo_poly.to_string(index=False))
        if len(pseudo_poly) >= 2:
            fit = state_count_fit(pseudo_poly)
            print(f"# state_count ~ {fit['slope']:.3f} * k + {fit['intercept']:.3f} "
                  f"(max residual {fit['max_residual']:.3g}, exact affine: {fit['exact_affine']})")
    else:
        if any(size < 2 for size in sizes):
            raise UsageError("random-fifo sizes need at least 2 nodes")
        random_fifo = run_random_fifo_suite(sizes, seed=args.seed, instances=args.instances)
        print(random_fifo.to_string(index=False))

    if args.excel:
        Path(args.excel).write_bytes(export_excel(pseudo_poly, random_fifo))
        logger.info(f"Wrote {args.excel}")
    return EXIT_OK


# ============================================================================
# ENTRY POINT
# ============================================================================

def _add_graph_query(parser: argparse.ArgumentParser):
    parser.add_argument("--graph", required=True, help="corpus name, shipped graph or file path")
    parser.add_argument("--source", help="source node name or id")
    parser.add_argument("--target", help="target node name or id")
    parser.add_argument("--t0", type=int, help="departure time in ticks")


def _add_expansion(parser: argparse.ArgumentParser):
    parser.add_argument("--allow-wait", action="store_true", help="allow waiting one tick at a node")
    parser.add_argument("--horizon", type=int, help="largest time explored")
    parser.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tempo", description=f"{APP_NAME} {APP_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    route = commands.add_parser("route", help="answer one routing query")
    _add_graph_query(route)
    route.add_argument("--algo", required=True, choices=list(ALGORITHMS))
    _add_expansion(route)
    route.set_defaults(handler=cmd_route)

    fifo = commands.add_parser("check-fifo", help="check edges for the FIFO property")
    fifo.add_argument("--graph", required=True)
    fifo.add_argument("--edge", type=int, help="edge id (default: all edges)")
    fifo.set_defaults(handler=cmd_check_fifo)

    exp = commands.add_parser("expand", help="expand the state-transition graph")
    _add_graph_query(exp)
    exp.add_argument("--dot", action="store_true", help="print Graphviz DOT instead of a state list")
    _add_expansion(exp)
    exp.set_defaults(handler=cmd_expand)

    bench = commands.add_parser("bench", help="run a benchmark suite")
    bench.add_argument("--suite", required=True, choices=list(BENCH_SUITES))
    bench.add_argument("--sizes", type=int, nargs="*")
    bench.add_argument("--seed", type=int, default=BENCH_DEFAULT_SEED)
    bench.add_argument("--instances", type=int, default=BENCH_INSTANCES_PER_SIZE)
    bench.add_argument("--excel", help="also write the results to this .xlsx file")
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=get_log_level(), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_USAGE

    try:
        return args.handler(args)
    except (UsageError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
    except RoutingError as e:
        print(f"error ({e.status}): {e}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
