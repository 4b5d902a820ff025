"""
TEMPO Route - Oracles and Instance Corpus
=========================================
Ground truth every engine answer is judged against:

- brute_force_fastest: exhaustive earliest arrival, over walks (default,
  authoritative) or over simple paths (fast pre-check), optional waiting
- brute_force_static:  minimum over all simple paths of summed costs
- scan_fifo:           tick-by-tick FIFO scan on the exact profile

and the instance corpus: the classic hand-built instances plus seeded random generators.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from modules.errors import TooLargeError
from modules.graph_core import (
    Graph, NodeId, StaticEdge, StaticGraph, TimePoint, TravelTimeFunction, FifoReport,
    FifoWitness, build_graph, check_fifo, check_node, constant, default_horizon, evaluate,
    exact_value, piecewise_constant, piecewise_linear, require_valid
)
from modules.routing_td import TdQuery
from modules.state_graph import pseudo_poly_family
from utils.constants import ORACLE_MAX_NODES

logger = logging.getLogger(__name__)


@dataclass
class CorpusInstance:
    name: str
    graph: Graph
    notes: str = ""
    query: Optional[TdQuery] = None


@dataclass
class OracleResult:
    arrival: Optional[int]
    path: Optional[Tuple[NodeId, ...]]
    explored_count: int = 0
    notes: str = ""


@dataclass(frozen=True)
class OracleOptions:
    allow_wait: bool = False
    max_wait_ticks: Optional[int] = None    # None: bounded by the horizon only
    horizon: Optional[TimePoint] = None
    walks: bool = True
    max_nodes: int = ORACLE_MAX_NODES


def _guard(node_count: int, limit: int):
    if node_count > limit:
        raise TooLargeError(node_count, limit)


# ============================================================================
# TIME-DEPENDENT ORACLE
# ============================================================================

def _departures(t: TimePoint, max_wait: int, horizon: TimePoint) -> range:
    return range(t, min(t + max_wait, horizon) + 1)


def _walk_oracle(g: Graph, s: NodeId, f: NodeId, t0: TimePoint,
                 max_wait: int, horizon: TimePoint) -> OracleResult:
    """Depth-first over (node, time) states; a state is explored at most once."""
    start = (s, t0)
    parent: Dict[Tuple[NodeId, TimePoint], Tuple[NodeId, TimePoint]] = {}
    seen = {start}
    stack = [start]
    best: Optional[Tuple[NodeId, TimePoint]] = None
    explored = 0

    while stack:
        node, t = stack.pop()
        if best is not None and t >= best[1]:
            continue
        explored += 1
        for dep in _departures(t, max_wait, horizon):
            for eid in g.out_edges(node):
                edge = g.edges[eid]
                arr = dep + evaluate(edge.cost, dep)
                if arr > horizon:
                    continue
                nxt = (edge.target, arr)
                if nxt in seen:
                    continue
                seen.add(nxt)
                parent[nxt] = (node, t)
                if edge.target == f:
                    if best is None or arr < best[1]:
                        best = nxt
                    continue
                stack.append(nxt)

    if best is None:
        return OracleResult(None, None, explored, "walks")
    path = [best[0]]
    state = best
    while state != start:
        state = parent[state]
        path.append(state[0])
    path.reverse()
    return OracleResult(best[1], tuple(path), explored, "walks")


def _simple_path_oracle(g: Graph, s: NodeId, f: NodeId, t0: TimePoint,
                        max_wait: int, horizon: TimePoint) -> OracleResult:
    best_arrival: Optional[int] = None
    best_path: Optional[Tuple[NodeId, ...]] = None
    explored = 0

    def visit(node: NodeId, t: TimePoint, path: List[NodeId], on_path: set):
        nonlocal best_arrival, best_path, explored
        explored += 1
        if node == f:
            if best_arrival is None or t < best_arrival:
                best_arrival, best_path = t, tuple(path)
            return
        for dep in _departures(t, max_wait, horizon):
            for eid in g.out_edges(node):
                edge = g.edges[eid]
                if edge.target in on_path:
                    continue
                arr = dep + evaluate(edge.cost, dep)
                if arr > horizon:
                    continue
                on_path.add(edge.target)
                path.append(edge.target)
                visit(edge.target, arr, path, on_path)
                path.pop()
                on_path.discard(edge.target)

    visit(s, t0, [s], {s})
    return OracleResult(best_arrival, best_path, explored, "simple paths")


def brute_force_fastest(g: Graph, s: NodeId, f: NodeId, t0: TimePoint,
                        opts: Optional[OracleOptions] = None) -> OracleResult:
    """Exhaustive earliest arrival at f leaving s at t0."""
    opts = opts or OracleOptions()
    _guard(g.node_count, opts.max_nodes)
    require_valid(g)
    check_node(g, s, "source")
    check_node(g, f, "target")

    if s == f:
        return OracleResult(t0, (s,), 1, "source is target")

    horizon = opts.horizon if opts.horizon is not None else default_horizon(g, t0)
    if opts.allow_wait:
        max_wait = opts.max_wait_ticks if opts.max_wait_ticks is not None else horizon
    else:
        max_wait = 0

    search = _walk_oracle if opts.walks else _simple_path_oracle
    result = search(g, s, f, t0, max_wait, horizon)
    result.notes = f"{result.notes}; horizon={horizon}; max_wait={max_wait}"
    return result


def brute_force_static(g: StaticGraph, s: NodeId, f: NodeId,
                       max_nodes: int = ORACLE_MAX_NODES) -> OracleResult:
    """Minimum over all simple s-f paths of the summed edge weights."""
    _guard(g.node_count, max_nodes)
    require_valid(g)
    check_node(g, s, "source")
    check_node(g, f, "target")

    best_length: Optional[int] = None
    best_path: Optional[Tuple[NodeId, ...]] = None
    explored = 0

    def visit(node: NodeId, length: int, path: List[NodeId], on_path: set):
        nonlocal best_length, best_path, explored
        explored += 1
        if node == f:
            if best_length is None or length < best_length:
                best_length, best_path = length, tuple(path)
            return
        for eid in g.out_edges(node):
            edge = g.edges[eid]
            if edge.target in on_path:
                continue
            on_path.add(edge.target)
            path.append(edge.target)
            visit(edge.target, length + edge.weight, path, on_path)
            path.pop()
            on_path.discard(edge.target)

    visit(s, 0, [s], {s})
    return OracleResult(best_length, best_path, explored, "simple paths")


# ============================================================================
# FIFO SCAN ORACLE
# ============================================================================

def scan_fifo(f: TravelTimeFunction, extra: int = 1) -> FifoReport:
    """Check t + c(t) < (t+1) + c(t+1) for every tick up to the last breakpoint + extra."""
    end = f.last_breakpoint + extra
    previous = exact_value(f, 0)
    for t in range(1, end + 1):
        current = t + exact_value(f, t)
        if current <= previous:
            return FifoReport(False, FifoWitness(t - 1, t, t - 1 + evaluate(f, t - 1), t + evaluate(f, t)))
        previous = current
    return FifoReport(True)


# ============================================================================
# RANDOM GENERATORS
# ============================================================================

@dataclass(frozen=True)
class RandomSpec:
    nodes: int
    edge_prob: float = 0.35
    fifo: bool = True
    max_value: int = 30
    breakpoints: int = 3
    seed: int = 0
    max_edges: Optional[int] = None


def _random_times(rng: np.random.Generator, count: int, span: int) -> List[int]:
    picks = rng.choice(np.arange(1, span + 1), size=min(count, span), replace=False)
    return sorted(int(t) for t in picks)


def random_function(rng: np.random.Generator, max_value: int, breakpoints: int,
                    fifo: Optional[bool] = None) -> TravelTimeFunction:
    """
    One random travel-time function. fifo=True biases the draw toward FIFO
    shapes, fifo=None draws without bias (the result may or may not be FIFO).
    """
    kind = int(rng.integers(0, 3))
    if kind == 0 or breakpoints < 1:
        return constant(int(rng.integers(0, max_value + 1)))

    count = int(rng.integers(1, breakpoints + 1))
    span = max(2 * max_value, count + 1)
    times = _random_times(rng, count, span)
    if kind == 1:
        times = [0] + times
    else:
        times = [int(rng.integers(0, times[0]))] + times if times[0] > 0 else times

    values = [int(rng.integers(0, max_value + 1))]
    for prev_t, t in zip(times, times[1:]):
        lowest = 0
        if fifo:
            # PWC: never drop; PWL: drop strictly less than the elapsed ticks
            lowest = values[-1] if kind == 1 else max(0, values[-1] - (t - prev_t) + 1)
        lowest = min(lowest, max_value)
        values.append(int(rng.integers(lowest, max_value + 1)))

    points = list(zip(times, values))
    return piecewise_constant(points) if kind == 1 else piecewise_linear(points)


def gen_random(spec: RandomSpec) -> CorpusInstance:
    """
    Seeded random instance. fifo=True: every edge passes check_fifo.
    fifo=False: at least one edge is a verified FIFO violator.
    """
    if spec.nodes < 2:
        raise ValueError(f"random instances need at least 2 nodes, got {spec.nodes}")
    rng = np.random.default_rng(spec.seed)

    pairs = [(u, v) for u in range(spec.nodes) for v in range(spec.nodes) if u != v]
    chosen = [pair for pair in pairs if rng.random() < spec.edge_prob]
    if spec.max_edges is not None and len(chosen) > spec.max_edges:
        keep = sorted(rng.choice(len(chosen), size=spec.max_edges, replace=False).tolist())
        chosen = [chosen[i] for i in keep]

    edges = []
    for u, v in chosen:
        if spec.fifo:
            f = None
            for _ in range(20):
                candidate = random_function(rng, spec.max_value, spec.breakpoints, fifo=True)
                if check_fifo(candidate).is_fifo:
                    f = candidate
                    break
            if f is None:
                logger.warning(f"seed {spec.seed}: no FIFO sample for {u}->{v}, using a constant")
                f = constant(int(rng.integers(0, spec.max_value + 1)))
        else:
            f = random_function(rng, spec.max_value, spec.breakpoints)
        edges.append((u, v, f))

    if not spec.fifo and all(check_fifo(f).is_fifo for _, _, f in edges):
        # Plant a violator: a drop of at least one tick more than the step allows
        low = int(rng.integers(0, max(spec.max_value - 1, 1)))
        high = int(rng.integers(low + 1, max(spec.max_value, low + 1) + 1))
        drop_at = int(rng.integers(1, max(spec.max_value, 2) + 1))
        violator = piecewise_constant([(0, high), (drop_at, low)])
        if edges:
            i = int(rng.integers(0, len(edges)))
            u, v, _ = edges[i]
            edges[i] = (u, v, violator)
        else:
            edges.append((0, 1, violator))

    names = tuple(f"n{i}" for i in range(spec.nodes))
    graph = build_graph(spec.nodes, edges, names)
    notes = (f"random nodes={spec.nodes} edge_prob={spec.edge_prob} fifo={spec.fifo} "
             f"max_value={spec.max_value} breakpoints={spec.breakpoints} seed={spec.seed}")
    return CorpusInstance(f"random-{'fifo' if spec.fifo else 'nonfifo'}-{spec.seed}", graph, notes)


def gen_random_static(nodes: int, edge_prob: float, max_weight: int, seed: int) -> StaticGraph:
    """Seeded random static graph with weights in [0, max_weight]."""
    rng = np.random.default_rng(seed)
    edges = []
    for u in range(nodes):
        for v in range(nodes):
            if u != v and rng.random() < edge_prob:
                edges.append(StaticEdge(u, v, int(rng.integers(0, max_weight + 1))))
    return StaticGraph(nodes, tuple(edges))


def plant_negative_cycle(nodes: int, max_weight: int, seed: int) -> Tuple[StaticGraph, List[NodeId]]:
    """
    Random non-negative graph plus a cycle of negative total reachable
    from node 0. Returns the graph and the planted cycle.
    """
    base = gen_random_static(nodes, 0.3, max_weight, seed)
    rng = np.random.default_rng(seed + 1)
    length = int(rng.integers(2, nodes + 1))
    cycle = [int(x) for x in rng.choice(nodes, size=length, replace=False)]

    edges = list(base.edges)
    weights = [int(rng.integers(0, max_weight + 1)) for _ in range(length - 1)]
    weights.append(-sum(weights) - int(rng.integers(1, max_weight + 1)))
    for i in range(length):
        edges.append(StaticEdge(cycle[i], cycle[(i + 1) % length], weights[i]))
    if cycle[0] != 0:
        edges.append(StaticEdge(0, cycle[0], int(rng.integers(0, max_weight + 1))))
    return StaticGraph(nodes, tuple(edges)), cycle


# ============================================================================
# PAPER CORPUS
# ============================================================================

def fig1_graph(vf: Optional[TravelTimeFunction] = None) -> Graph:
    """s->u, s->v, u->v cost 1; v->f costs 10 before time 2 and 1 from then on."""
    vf = vf or piecewise_constant([(0, 10), (2, 1)])
    return build_graph(4, [
        (0, 1, constant(1)),
        (0, 2, constant(1)),
        (1, 2, constant(1)),
        (2, 3, vf),
    ], names=("s", "u", "v", "f"))


def triangle_graph() -> Graph:
    """s->a 5, s->b 1, b->a 2: the unique shortest s-a path is (s, b, a)."""
    return build_graph(3, [
        (0, 1, constant(5)),
        (0, 2, constant(1)),
        (2, 1, constant(2)),
    ], names=("s", "a", "b"))


def builtin_corpus() -> List[CorpusInstance]:
    return [
        CorpusInstance("fig1", fig1_graph(),
                       "counterexample: naive relaxation reaches f at 11, the fastest walk at 3",
                       TdQuery(0, 3, 0)),
        CorpusInstance("fig1-fifo", fig1_graph(constant(10)),
                       "fig1 with v->f made Constant(10); all costs FIFO",
                       TdQuery(0, 3, 0)),
        CorpusInstance("fig3-k4", pseudo_poly_family(4),
                       "pseudo-polynomial family, k=4",
                       TdQuery(0, 2, 0)),
        CorpusInstance("triangle", triangle_graph(),
                       "static triangle with a unique optimum",
                       TdQuery(0, 1, 0)),
    ]


def corpus_by_name() -> Dict[str, CorpusInstance]:
    return {instance.name: instance for instance in builtin_corpus()}
