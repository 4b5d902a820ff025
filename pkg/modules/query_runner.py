"""
TEMPO Route - Query Runner
==========================
One query, one algorithm, one result document. Shared by `cli.py route`
and the Route Query page so both report the same statuses and stats.
"""

import logging
from typing import Optional, Tuple, Union

from modules.errors import InvalidQueryError, NonFifoEdgeError, RoutingError, TruncatedError
from modules.graph_core import Graph, StaticGraph, static_view
from modules.graph_io import build_result_document, error_document, fifo_summary
from modules.routing_static import astar, bellman_ford, bidirectional_dijkstra, dijkstra
from modules.routing_td import (
    RouteResult, TdQuery, extract_route, naive_td_dijkstra, td_astar, td_dijkstra_fifo
)
from modules.state_graph import ExpandOptions, solve_via_state_graph
from utils.constants import ALGORITHMS

logger = logging.getLogger(__name__)


def _run_static(g: StaticGraph, q: TdQuery, algo: str) -> dict:
    if algo in ("dijkstra", "bellman-ford") and q.target is None:
        d = dijkstra(g, q.source) if algo == "dijkstra" else bellman_ford(g, q.source)
        return build_result_document(g, q, algo, labels=d.dist, stats=d.stats)

    if algo == "astar":
        path = astar(g, q.source, q.target)
    elif algo == "bidir":
        path = bidirectional_dijkstra(g, q.source, q.target)
    elif algo == "dijkstra":
        path = dijkstra(g, q.source, q.target).path_to(q.target, g)
    else:
        path = bellman_ford(g, q.source).path_to(q.target, g)
    return build_result_document(g, q, algo, length=path.length, nodes=path.nodes, stats=path.stats)


def _run_td(g: Graph, q: TdQuery, algo: str,
            opts: Optional[ExpandOptions]) -> Tuple[dict, Optional[RouteResult]]:
    if algo == "state-graph":
        route = solve_via_state_graph(g, q, opts)
    elif algo == "td-astar":
        route = td_astar(g, q)
    else:
        search = naive_td_dijkstra if algo == "naive-td" else td_dijkstra_fifo
        times = search(g, q)
        if q.target is None:
            doc = build_result_document(g, q, algo, labels=times.arrival, stats=times.stats,
                                        fifo=fifo_summary(g))
            return doc, None
        route = extract_route(times, q.target)
    doc = build_result_document(g, q, algo, arrival=route.arrival, nodes=route.nodes,
                                edge_events=route.edge_events, stats=route.stats,
                                fifo=fifo_summary(g))
    return doc, route


def run_query(graph: Union[Graph, StaticGraph], q: TdQuery, algo: str,
              opts: Optional[ExpandOptions] = None) -> Tuple[dict, Optional[RouteResult]]:
    """
    Run `algo` on `q` and return (result document, route or None).

    Static algorithms take a StaticGraph as is, or freeze a Graph at q.t0.
    Routing failures become error documents; only a bad algorithm name raises.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")

    static = ALGORITHMS[algo]["family"] == "static"
    g = static_view(graph, at=q.t0) if static and isinstance(graph, Graph) else graph
    try:
        if static:
            return _run_static(g, q, algo), None
        if not isinstance(g, Graph):
            raise InvalidQueryError(f"{algo} needs a time-dependent graph")
        return _run_td(g, q, algo, opts)
    except NonFifoEdgeError as e:
        return error_document(g, q, algo, e, fifo=fifo_summary(g)), None
    except TruncatedError as e:
        return error_document(g, q, algo, e, stats={
            'states': e.stats.state_count, 'transitions': e.stats.transition_count,
            'horizon': e.stats.horizon}), None
    except RoutingError as e:
        logger.debug(f"{algo} on {q}: {e.status}")
        return error_document(g, q, algo, e), None
