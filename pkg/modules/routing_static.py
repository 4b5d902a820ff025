"""
TEMPO Route - Static Shortest Paths
===================================
Classic single-source searches on time-independent costs:

- dijkstra:               settle-once search, non-negative costs
- bellman_ford:           round-based relaxation, negative costs, cycle detection
- astar:                  Dijkstra keyed by d_u + h(u)
- bidirectional_dijkstra: forward search on g, backward search on reverse(g)
- check_heuristic:        admissibility / consistency audit

Relaxing edge uv means d_v <- min{d_v, d_u + c(uv)}. Priority ties are
broken by the smaller NodeId. Every call owns its mutable state.
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from modules.errors import NegativeCostError, NegativeCycleError, UnreachableError
from modules.graph_core import EdgeId, NodeId, StaticGraph, check_node, require_valid

logger = logging.getLogger(__name__)

Heuristic = Union[Callable[[NodeId], int], Mapping[NodeId, int], Sequence[int]]


@dataclass
class PathResult:
    nodes: Tuple[NodeId, ...]
    edges: Tuple[EdgeId, ...]
    length: int
    stats: Dict[str, int] = field(default_factory=dict)


@dataclass
class StaticDistances:
    source: NodeId
    dist: Dict[NodeId, int]
    parent: Dict[NodeId, Tuple[NodeId, EdgeId]]
    stats: Dict[str, int] = field(default_factory=dict)

    def path_to(self, target: NodeId, g: Optional[StaticGraph] = None) -> PathResult:
        """Walk parent links back to the source."""
        if target not in self.dist:
            raise UnreachableError(self.source, target)
        nodes = [target]
        edges = []
        node = target
        while node != self.source:
            prev, eid = self.parent[node]
            nodes.append(prev)
            edges.append(eid)
            node = prev
            if len(nodes) > len(self.dist) + 1:
                raise RuntimeError(f"parent links from {target} do not reach {self.source}")
        nodes.reverse()
        edges.reverse()
        length = self.dist[target] if g is None else sum(g.edges[e].weight for e in edges)
        return PathResult(tuple(nodes), tuple(edges), length, dict(self.stats))


@dataclass
class HeuristicReport:
    admissible: bool
    consistent: bool
    goal_zero: bool
    inadmissible_nodes: List[NodeId] = field(default_factory=list)
    inconsistent_edges: List[EdgeId] = field(default_factory=list)


def _heuristic_fn(h: Optional[Heuristic]) -> Callable[[NodeId], int]:
    if h is None:
        return lambda node: 0
    if callable(h):
        return h
    return lambda node: h[node]


def _require_non_negative(g: StaticGraph):
    for eid, edge in enumerate(g.edges):
        if edge.weight < 0:
            raise NegativeCostError(eid, edge.weight)


# ============================================================================
# DIJKSTRA
# ============================================================================

def dijkstra(g: StaticGraph, source: NodeId, target: Optional[NodeId] = None,
             trace: Optional[list] = None) -> StaticDistances:
    """
    Dijkstra from source. Stops early once target is settled when given.

    When `trace` is a list, ('settle', node, d) and ('relax', node, old, new)
    events are appended to it.
    """
    require_valid(g)
    check_node(g, source, "source")
    _require_non_negative(g)

    dist: Dict[NodeId, int] = {source: 0}
    parent: Dict[NodeId, Tuple[NodeId, EdgeId]] = {}
    settled = set()
    relaxations = 0
    heap = [(0, source)]

    while heap:
        d_u, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        if trace is not None:
            trace.append(('settle', u, d_u))
        if u == target:
            break
        for eid in g.out_edges(u):
            edge = g.edges[eid]
            v = edge.target
            if v in settled:
                continue
            candidate = d_u + edge.weight
            relaxations += 1
            old = dist.get(v)
            if old is None or candidate < old:
                dist[v] = candidate
                parent[v] = (u, eid)
                if trace is not None:
                    trace.append(('relax', v, old, candidate))
                heapq.heappush(heap, (candidate, v))

    # Labels of unsettled nodes are only tentative after an early stop
    if target is not None:
        dist = {v: d for v, d in dist.items() if v in settled}
        parent = {v: p for v, p in parent.items() if v in settled}

    stats = {'settled': len(settled), 'relaxations': relaxations}
    logger.debug(f"dijkstra from {source}: {stats}")
    return StaticDistances(source, dist, parent, stats)


def reverse_dijkstra(g: StaticGraph, target: NodeId) -> StaticDistances:
    """Distances from every node to target (Dijkstra on the reverse graph)."""
    return dijkstra(g.reversed(), target)


# ============================================================================
# BELLMAN-FORD
# ============================================================================

def _extract_cycle(g: StaticGraph, parent: Dict[NodeId, Tuple[NodeId, EdgeId]],
                   start: NodeId) -> Tuple[List[NodeId], List[EdgeId]]:
    # Walking node_count parent steps lands inside the cycle
    node = start
    for _ in range(g.node_count):
        node = parent[node][0]
    cycle_nodes = [node]
    cycle_edges = []
    current = node
    while True:
        prev, eid = parent[current]
        cycle_edges.append(eid)
        if prev == node:
            break
        cycle_nodes.append(prev)
        current = prev
    cycle_nodes.reverse()
    cycle_edges.reverse()
    return cycle_nodes, cycle_edges


def bellman_ford(g: StaticGraph, source: NodeId) -> StaticDistances:
    """At most |V|-1 relaxation rounds plus one detection round."""
    require_valid(g)
    check_node(g, source, "source")

    dist: Dict[NodeId, int] = {source: 0}
    parent: Dict[NodeId, Tuple[NodeId, EdgeId]] = {}
    relaxations = 0
    rounds = 0

    for _ in range(max(g.node_count - 1, 0)):
        rounds += 1
        changed = False
        for eid, edge in enumerate(g.edges):
            d_u = dist.get(edge.source)
            if d_u is None:
                continue
            relaxations += 1
            candidate = d_u + edge.weight
            if edge.target not in dist or candidate < dist[edge.target]:
                dist[edge.target] = candidate
                parent[edge.target] = (edge.source, eid)
                changed = True
        if not changed:
            break

    last_relaxed = None
    for eid, edge in enumerate(g.edges):
        d_u = dist.get(edge.source)
        if d_u is None:
            continue
        candidate = d_u + edge.weight
        if candidate < dist[edge.target]:
            dist[edge.target] = candidate
            parent[edge.target] = (edge.source, eid)
            last_relaxed = edge.target

    if last_relaxed is not None:
        nodes, edges = _extract_cycle(g, parent, last_relaxed)
        total = sum(g.edges[e].weight for e in edges)
        logger.info(f"bellman_ford from {source}: negative cycle {nodes} (total {total})")
        raise NegativeCycleError(nodes, edges, total)

    stats = {'settled': len(dist), 'relaxations': relaxations, 'rounds': rounds}
    return StaticDistances(source, dist, parent, stats)


# ============================================================================
# A*
# ============================================================================

def astar(g: StaticGraph, source: NodeId, target: NodeId,
          h: Optional[Heuristic] = None) -> PathResult:
    """
    A* search keyed by d_u + h(u). Optimal when h is admissible and consistent;
    nodes are reopened if an inconsistent h makes a settled label improvable.
    """
    require_valid(g)
    check_node(g, source, "source")
    check_node(g, target, "target")
    _require_non_negative(g)
    hf = _heuristic_fn(h)

    dist: Dict[NodeId, int] = {source: 0}
    parent: Dict[NodeId, Tuple[NodeId, EdgeId]] = {}
    closed = set()
    expanded = 0
    relaxations = 0
    heap = [(hf(source), source)]

    while heap:
        key, u = heapq.heappop(heap)
        if u in closed or key != dist[u] + hf(u):
            continue
        closed.add(u)
        expanded += 1
        if u == target:
            break
        for eid in g.out_edges(u):
            edge = g.edges[eid]
            v = edge.target
            candidate = dist[u] + edge.weight
            relaxations += 1
            if v not in dist or candidate < dist[v]:
                dist[v] = candidate
                parent[v] = (u, eid)
                closed.discard(v)
                heapq.heappush(heap, (candidate + hf(v), v))

    if target not in closed:
        raise UnreachableError(source, target)

    stats = {'settled': expanded, 'relaxations': relaxations}
    return StaticDistances(source, dist, parent, stats).path_to(target, g)


# ============================================================================
# BIDIRECTIONAL DIJKSTRA
# ============================================================================

def _walk(parent: Dict[NodeId, Tuple[NodeId, EdgeId]], start: NodeId,
          end: NodeId) -> Tuple[List[NodeId], List[EdgeId]]:
    nodes, edges = [start], []
    node = start
    while node != end:
        prev, eid = parent[node]
        nodes.append(prev)
        edges.append(eid)
        node = prev
    return nodes, edges


def bidirectional_dijkstra(g: StaticGraph, source: NodeId, target: NodeId) -> PathResult:
    """
    Forward search from source, backward search from target on the reverse
    graph, alternating sides. Stops once the two frontier minima add up to at
    least the best meeting length found so far.
    """
    require_valid(g)
    check_node(g, source, "source")
    check_node(g, target, "target")
    _require_non_negative(g)

    if source == target:
        return PathResult((source,), (), 0, {'settled': 0, 'relaxations': 0})

    graphs = (g, g.reversed())
    dists: Tuple[Dict[NodeId, int], Dict[NodeId, int]] = ({source: 0}, {target: 0})
    parents: Tuple[Dict, Dict] = ({}, {})
    settled = (set(), set())
    heaps = ([(0, source)], [(0, target)])
    best = None
    meet = None
    relaxations = 0
    side = 1

    def frontier_min(s: int) -> Optional[int]:
        heap = heaps[s]
        while heap and heap[0][1] in settled[s]:
            heapq.heappop(heap)
        return heap[0][0] if heap else None

    while True:
        top = (frontier_min(0), frontier_min(1))
        if top[0] is None or top[1] is None:
            break
        if best is not None and top[0] + top[1] >= best:
            break

        side = 1 - side
        d_u, u = heapq.heappop(heaps[side])
        settled[side].add(u)
        other = 1 - side
        for eid in graphs[side].out_edges(u):
            v = graphs[side].edges[eid].target
            candidate = d_u + graphs[side].edges[eid].weight
            relaxations += 1
            if v not in dists[side] or candidate < dists[side][v]:
                dists[side][v] = candidate
                parents[side][v] = (u, eid)
                heapq.heappush(heaps[side], (candidate, v))
                if v in dists[other]:
                    total = candidate + dists[other][v]
                    if best is None or total < best or (total == best and v < meet):
                        best, meet = total, v

    if best is None:
        raise UnreachableError(source, target)

    forward_nodes, forward_edges = _walk(parents[0], meet, source)
    backward_nodes, backward_edges = _walk(parents[1], meet, target)
    nodes = list(reversed(forward_nodes)) + backward_nodes[1:]
    edges = list(reversed(forward_edges)) + backward_edges
    length = sum(g.edges[e].weight for e in edges)
    stats = {'settled': len(settled[0]) + len(settled[1]), 'relaxations': relaxations}
    return PathResult(tuple(nodes), tuple(edges), length, stats)


# ============================================================================
# HEURISTIC AUDIT
# ============================================================================

def check_heuristic(g: StaticGraph, target: NodeId, h: Heuristic) -> HeuristicReport:
    """Admissibility against reverse-Dijkstra distances, consistency per edge."""
    check_node(g, target, "target")
    hf = _heuristic_fn(h)
    to_target = reverse_dijkstra(g, target).dist

    inadmissible = [u for u in range(g.node_count)
                    if u in to_target and hf(u) > to_target[u]]
    inconsistent = [eid for eid, edge in enumerate(g.edges)
                    if hf(edge.source) > edge.weight + hf(edge.target)]

    return HeuristicReport(
        admissible=not inadmissible,
        consistent=not inconsistent,
        goal_zero=hf(target) == 0,
        inadmissible_nodes=inadmissible,
        inconsistent_edges=inconsistent,
    )
