"""
TEMPO Route - Time-Dependent Fastest Paths
==========================================
Earliest-arrival searches from a source departing at t0.

- naive_td_dijkstra: Dijkstra with d_v <- min{d_v, d_u + c(uv, d_u)} on any
  graph. Unsound when an edge is non-FIFO; kept because it reproduces the
  classic counterexample exactly.
- td_dijkstra_fifo:  the same search, guarded by a whole-graph FIFO check.
- td_astar:          FIFO search keyed by arrival + free-flow distance to target.

No search waits at a node.
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from modules.errors import InvalidQueryError, UnreachableError
from modules.graph_core import (
    EdgeId, Graph, NodeId, TimePoint, advance, check_node, evaluate,
    require_fifo, require_non_negative, require_valid, static_view
)
from modules.routing_static import reverse_dijkstra

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TdQuery:
    source: NodeId
    target: Optional[NodeId] = None
    t0: TimePoint = 0


class EdgeEvent(NamedTuple):
    edge: EdgeId
    depart: TimePoint
    arrive: TimePoint


@dataclass
class ArrivalTimes:
    source: NodeId
    t0: TimePoint
    arrival: Dict[NodeId, TimePoint]
    parent: Dict[NodeId, Tuple[NodeId, EdgeId, TimePoint]]
    algorithm: str = ""
    stats: Dict[str, int] = field(default_factory=dict)


@dataclass
class RouteResult:
    nodes: Tuple[NodeId, ...]
    edge_events: Tuple[EdgeEvent, ...]
    arrival: TimePoint
    algorithm: str = ""
    waiting: bool = False
    stats: Dict[str, int] = field(default_factory=dict)

    def prefix_arrivals(self) -> List[Tuple[NodeId, TimePoint]]:
        """(node, arrival) for every prefix endpoint, source first."""
        if not self.edge_events:
            return [(self.nodes[0], self.arrival)]
        first = [(self.nodes[0], self.edge_events[0].depart)]
        return first + [(node, ev.arrive) for node, ev in zip(self.nodes[1:], self.edge_events)]


def check_query(g: Graph, q: TdQuery, need_target: bool = False):
    require_valid(g)
    check_node(g, q.source, "source")
    if q.target is None:
        if need_target:
            raise InvalidQueryError("this search needs a target node")
    else:
        check_node(g, q.target, "target")
    if q.t0 < 0:
        raise InvalidQueryError(f"t0 {q.t0} must be non-negative")


# ============================================================================
# SEARCH SKELETON
# ============================================================================

def _td_search(g: Graph, q: TdQuery, algorithm: str,
               heuristic: Optional[Callable[[NodeId], Optional[int]]] = None,
               stop_at_target: bool = False) -> ArrivalTimes:
    """Settle-once label-setting search over arrival times."""
    h = heuristic or (lambda node: 0)
    arrival: Dict[NodeId, TimePoint] = {q.source: q.t0}
    parent: Dict[NodeId, Tuple[NodeId, EdgeId, TimePoint]] = {}
    settled = set()
    relaxations = 0
    heap = [(q.t0 + h(q.source), q.source)]

    while heap:
        _, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        if stop_at_target and u == q.target:
            break
        d_u = arrival[u]
        for eid in g.out_edges(u):
            edge = g.edges[eid]
            v = edge.target
            if v in settled:
                continue
            h_v = h(v)
            if h_v is None:
                continue
            candidate = advance(d_u, evaluate(edge.cost, d_u))
            relaxations += 1
            if v not in arrival or candidate < arrival[v]:
                arrival[v] = candidate
                parent[v] = (u, eid, d_u)
                heapq.heappush(heap, (candidate + h_v, v))

    if stop_at_target:
        arrival = {v: t for v, t in arrival.items() if v in settled}
        parent = {v: p for v, p in parent.items() if v in settled}

    stats = {'settled': len(settled), 'relaxations': relaxations}
    logger.info(f"{algorithm} from {g.name_of(q.source)} at t0={q.t0}: {stats}")
    return ArrivalTimes(q.source, q.t0, arrival, parent, algorithm, stats)


# ============================================================================
# PUBLIC SEARCHES
# ============================================================================

def naive_td_dijkstra(g: Graph, q: TdQuery) -> ArrivalTimes:
    """Direct time-dependent extension of Dijkstra. Wrong on non-FIFO edges."""
    check_query(g, q)
    require_non_negative(g)
    return _td_search(g, q, "naive-td")


def td_dijkstra_fifo(g: Graph, q: TdQuery) -> ArrivalTimes:
    """Exact earliest arrivals; refuses graphs with a non-FIFO edge."""
    check_query(g, q)
    require_non_negative(g)
    require_fifo(g)
    return _td_search(g, q, "td-fifo")


def free_flow_heuristic(g: Graph, target: NodeId) -> Callable[[NodeId], Optional[int]]:
    """
    h(u) = static distance u -> target under per-edge minimum travel times.
    None marks nodes that cannot reach the target at all.
    """
    lower = reverse_dijkstra(static_view(g), target).dist
    return lambda node: lower.get(node)


def td_astar(g: Graph, q: TdQuery) -> RouteResult:
    """FIFO search toward q.target guided by the free-flow lower bound."""
    check_query(g, q, need_target=True)
    require_non_negative(g)
    require_fifo(g)
    h = free_flow_heuristic(g, q.target)
    if h(q.source) is None:
        raise UnreachableError(q.source, q.target)
    result = _td_search(g, q, "td-astar", heuristic=h, stop_at_target=True)
    return extract_route(result, q.target)


def extract_route(a: ArrivalTimes, target: NodeId) -> RouteResult:
    """Walk parent links from target back to the source."""
    if target not in a.arrival:
        raise UnreachableError(a.source, target)

    nodes = [target]
    events = []
    node = target
    while node != a.source:
        prev, eid, depart = a.parent[node]
        events.append(EdgeEvent(eid, depart, a.arrival[node]))
        nodes.append(prev)
        node = prev
    nodes.reverse()
    events.reverse()
    return RouteResult(tuple(nodes), tuple(events), a.arrival[target], a.algorithm,
                       stats=dict(a.stats))


# ============================================================================
# ROUTE AUDIT
# ============================================================================

def audit_route(g: Graph, route: RouteResult) -> List[str]:
    """Problems found when replaying a route against the graph; empty means consistent."""
    problems = []
    if len(route.nodes) != len(route.edge_events) + 1:
        problems.append("node count does not match edge events")
        return problems

    previous_arrive = None
    for i, event in enumerate(route.edge_events):
        edge = g.edges[event.edge]
        if (edge.source, edge.target) != (route.nodes[i], route.nodes[i + 1]):
            problems.append(f"event {i}: edge {event.edge} does not join "
                            f"{route.nodes[i]} -> {route.nodes[i + 1]}")
        expected = event.depart + evaluate(edge.cost, event.depart)
        if event.arrive != expected:
            problems.append(f"event {i}: arrive {event.arrive}, edge gives {expected}")
        if previous_arrive is not None:
            if route.waiting and event.depart < previous_arrive:
                problems.append(f"event {i}: departs {event.depart} before arriving {previous_arrive}")
            if not route.waiting and event.depart != previous_arrive:
                problems.append(f"event {i}: departs {event.depart}, arrived {previous_arrive}")
        previous_arrive = event.arrive

    last = route.edge_events[-1].arrive if route.edge_events else route.arrival
    if route.arrival != last:
        problems.append(f"arrival {route.arrival} differs from last event {last}")
    return problems
