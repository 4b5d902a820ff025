"""
TEMPO Route - State-Transition Graph
====================================
Exact fastest paths for arbitrary (also non-FIFO) travel-time functions.

A state is a pair (node, time). Traversing edge uv from state (u, t) leads
to (v, t + c(uv, t)), so transition costs are plain durations and static
Dijkstra over the reachable states gives the earliest arrival.

The reachable state set can grow with the magnitude of the travel times
(pseudo_poly_family builds the standard example), so every expansion is
bounded by a horizon and a state cap; hitting either is reported as
truncation, never as a wrong answer.
"""

import heapq
import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import graphviz
import numpy as np
import pandas as pd

from modules.errors import TruncatedError, UnreachableError
from modules.graph_core import (
    EdgeId, Graph, NodeId, StaticEdge, StaticGraph, TimePoint, advance, build_graph,
    check_node, constant, default_horizon, evaluate, piecewise_constant, require_non_negative,
    require_valid
)
from modules.routing_static import dijkstra
from modules.routing_td import EdgeEvent, RouteResult, TdQuery, check_query
from utils.constants import DEFAULT_MAX_STATES

logger = logging.getLogger(__name__)

WAIT_TICKS = 1


class State(NamedTuple):
    node: NodeId
    time: TimePoint


class Transition(NamedTuple):
    source: State
    target: State
    via: Optional[EdgeId]
    cost: int


@dataclass(frozen=True)
class ExpandOptions:
    allow_wait: bool = False
    horizon: Optional[TimePoint] = None     # None: default_horizon(g, t0)
    max_states: int = DEFAULT_MAX_STATES
    target: Optional[NodeId] = None         # set: target-bounded expansion

    def __post_init__(self):
        if self.horizon is not None and self.horizon <= 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if self.max_states <= 0:
            raise ValueError(f"max_states must be positive, got {self.max_states}")


@dataclass(frozen=True)
class ExpansionStats:
    state_count: int
    transition_count: int
    truncated: bool
    horizon: TimePoint
    capped: bool = False                    # stopped by max_states
    frontier_time: Optional[TimePoint] = None
    best_target_time: Optional[TimePoint] = None


@dataclass(frozen=True)
class StateGraph:
    initial: State
    states: Tuple[State, ...]               # sorted by (time, node)
    transitions: Tuple[Transition, ...]
    stats: ExpansionStats
    names: Tuple[str, ...] = ()

    def label(self, state: State) -> str:
        name = self.names[state.node] if state.node < len(self.names) else str(state.node)
        return f"{name},{state.time}"


def state_order(state: State) -> Tuple[TimePoint, NodeId]:
    return state.time, state.node


# ============================================================================
# EXPANSION
# ============================================================================

def expand(g: Graph, source: NodeId, t0: TimePoint,
           opts: Optional[ExpandOptions] = None) -> StateGraph:
    """
    Reachable states from (source, t0), expanded in (time, node) order.

    Without a target this is the closure up to the horizon. With
    opts.target the target is terminal and no non-target state at or after
    the best target time found so far is created.
    """
    opts = opts or ExpandOptions()
    require_valid(g)
    check_node(g, source, "source")
    if opts.target is not None:
        check_node(g, opts.target, "target")
    require_non_negative(g)
    horizon = opts.horizon if opts.horizon is not None else default_horizon(g, t0)
    target = opts.target

    initial = State(source, t0)
    states = {initial}
    transitions: List[Transition] = []
    heap = [(t0, source)]
    truncated = False
    capped = False
    frontier_time = None
    best = t0 if target == source else None

    while heap and not capped:
        time, node = heapq.heappop(heap)
        if target is not None:
            if node == target:
                continue
            if best is not None and time >= best:
                continue
        here = State(node, time)

        successors: List[Tuple[State, Optional[EdgeId], int]] = []
        for eid in g.out_edges(node):
            edge = g.edges[eid]
            duration = evaluate(edge.cost, time)
            successors.append((State(edge.target, advance(time, duration)), eid, duration))
        if opts.allow_wait:
            successors.append((State(node, advance(time, WAIT_TICKS)), None, WAIT_TICKS))

        if target is not None:
            for nxt, _, _ in successors:
                if nxt.node == target and nxt.time <= horizon and (best is None or nxt.time < best):
                    best = nxt.time
            if best is not None:
                successors = [s for s in successors if s[0].node == target or s[0].time < best]

        for nxt, via, cost in successors:
            if nxt.time > horizon:
                truncated = True
                continue
            if nxt not in states:
                if len(states) >= opts.max_states:
                    truncated = capped = True
                    frontier_time = time
                    break
                states.add(nxt)
                heapq.heappush(heap, (nxt.time, nxt.node))
            transitions.append(Transition(here, nxt, via, cost))

    if truncated:
        logger.warning(f"Expansion from ({g.name_of(source)},{t0}) truncated: "
                       f"{len(states)} states, horizon {horizon}, cap {opts.max_states}")

    stats = ExpansionStats(
        state_count=len(states),
        transition_count=len(transitions),
        truncated=truncated,
        horizon=horizon,
        capped=capped,
        frontier_time=frontier_time,
        best_target_time=best,
    )
    ordered = tuple(sorted(states, key=state_order))
    return StateGraph(initial, ordered, tuple(transitions), stats, g.names)


# ============================================================================
# SOLVER
# ============================================================================

def to_static_graph(sg: StateGraph) -> Tuple[StaticGraph, Dict[State, int]]:
    """Dense static graph over states; edge id i is transition i."""
    index = {state: i for i, state in enumerate(sg.states)}
    edges = tuple(StaticEdge(index[t.source], index[t.target], t.cost) for t in sg.transitions)
    return StaticGraph(len(sg.states), edges, tuple(sg.label(s) for s in sg.states)), index


def solve_via_state_graph(g: Graph, q: TdQuery, opts: Optional[ExpandOptions] = None) -> RouteResult:
    """Static Dijkstra over the state graph; the answer is the earliest target state."""
    check_query(g, q, need_target=True)
    opts = replace(opts or ExpandOptions(), target=q.target)

    if q.source == q.target:
        return RouteResult((q.source,), (), q.t0, "state-graph", opts.allow_wait,
                           {'states': 1, 'transitions': 0, 'settled': 0})

    sg = expand(g, q.source, q.t0, opts)
    static, index = to_static_graph(sg)
    distances = dijkstra(static, index[sg.initial])

    reached = [s for s in sg.states if s.node == q.target and index[s] in distances.dist]
    stats = {
        'states': sg.stats.state_count,
        'transitions': sg.stats.transition_count,
        'truncated': int(sg.stats.truncated),
        'settled': distances.stats['settled'],
    }
    if not reached:
        if sg.stats.truncated:
            raise TruncatedError(sg.stats)
        raise UnreachableError(q.source, q.target)

    best = min(reached, key=state_order)
    if sg.stats.capped and best.time > sg.stats.frontier_time:
        raise TruncatedError(sg.stats)

    path = distances.path_to(index[best])
    moves = [sg.transitions[eid] for eid in path.edges]
    nodes = [q.source]
    events = []
    for move in moves:
        if move.via is None:
            continue
        nodes.append(move.target.node)
        events.append(EdgeEvent(move.via, move.source.time, move.target.time))

    return RouteResult(tuple(nodes), tuple(events), best.time, "state-graph", opts.allow_wait, stats)


def audit_state_graph(g: Graph, sg: StateGraph) -> List[str]:
    """Re-check every transition against the travel-time functions."""
    problems = []
    known = set(sg.states)
    for i, t in enumerate(sg.transitions):
        if t.source not in known or t.target not in known:
            problems.append(f"transition {i}: endpoint is not a listed state")
        if t.target.time != t.source.time + t.cost:
            problems.append(f"transition {i}: time {t.target.time} != {t.source.time} + {t.cost}")
        if t.via is None:
            if t.target.node != t.source.node or t.cost != WAIT_TICKS:
                problems.append(f"transition {i}: malformed waiting step")
            continue
        edge = g.edges[t.via]
        if (edge.source, edge.target) != (t.source.node, t.target.node):
            problems.append(f"transition {i}: edge {t.via} does not join the states")
        if t.cost != evaluate(edge.cost, t.source.time):
            problems.append(f"transition {i}: cost {t.cost} != c({t.source.time})")

    # Every state must be reachable from the initial one
    outgoing: Dict[State, List[State]] = {}
    for t in sg.transitions:
        outgoing.setdefault(t.source, []).append(t.target)
    seen = {sg.initial}
    stack = [sg.initial]
    while stack:
        for nxt in outgoing.get(stack.pop(), []):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    for state in known - seen:
        problems.append(f"state {sg.label(state)} is unreachable from {sg.label(sg.initial)}")
    return problems


# ============================================================================
# PSEUDO-POLYNOMIAL FAMILY
# ============================================================================

def pseudo_poly_family(k: int) -> Graph:
    """
    Three nodes s, u, f: s <-> u cost 1 both ways, s -> f costs 2k before
    time k and 1 from time k on.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return build_graph(3, [
        (0, 1, constant(1)),
        (1, 0, constant(1)),
        (0, 2, piecewise_constant([(0, 2 * k), (k, 1)])),
    ], names=("s", "u", "f"))


def state_count_sweep(ks: Iterable[int], targeted: bool = False) -> pd.DataFrame:
    """Expansion size of pseudo_poly_family(k) from (s, 0) for each k."""
    rows = []
    for k in ks:
        g = pseudo_poly_family(k)
        opts = ExpandOptions(target=2) if targeted else ExpandOptions()
        sg = expand(g, 0, 0, opts)
        rows.append({
            'k': k,
            'state_count': sg.stats.state_count,
            'transition_count': sg.stats.transition_count,
            'horizon': sg.stats.horizon,
            'truncated': sg.stats.truncated,
        })
    return pd.DataFrame(rows, columns=['k', 'state_count', 'transition_count', 'horizon', 'truncated'])


def fit_state_counts(df: pd.DataFrame) -> Dict[str, float]:
    """Least-squares line through state_count vs k, plus an exact affinity check."""
    ks = df['k'].to_numpy(dtype=float)
    counts = df['state_count'].to_numpy(dtype=float)
    if len(ks) < 2:
        return {'slope': float('nan'), 'intercept': float('nan'),
                'max_residual': 0.0, 'exact_affine': True}
    slope, intercept = np.polyfit(ks, counts, 1)
    residual = float(np.max(np.abs(counts - (slope * ks + intercept))))

    # Exact over integers: equal ratios of consecutive differences
    k_int = df['k'].astype(int).tolist()
    c_int = df['state_count'].astype(int).tolist()
    dk0, dc0 = k_int[1] - k_int[0], c_int[1] - c_int[0]
    exact = all((c_int[i + 1] - c_int[i]) * dk0 == dc0 * (k_int[i + 1] - k_int[i])
                for i in range(len(k_int) - 1))
    return {'slope': float(slope), 'intercept': float(intercept),
            'max_residual': residual, 'exact_affine': exact}


# ============================================================================
# DOT EXPORT
# ============================================================================

def to_digraph(sg: StateGraph) -> graphviz.Digraph:
    """One node per state (ids q0, q1, ... in state order), one labeled edge per transition."""
    index = {state: i for i, state in enumerate(sg.states)}
    dot = graphviz.Digraph(name='state_graph', graph_attr={'rankdir': 'LR'})
    for state, i in index.items():
        dot.node(f"q{i}", label=sg.label(state))
    for t in sg.transitions:
        attrs = {} if t.via is not None else {'style': 'dashed'}
        dot.edge(f"q{index[t.source]}", f"q{index[t.target]}", label=str(t.cost), **attrs)
    return dot


def export_dot(sg: StateGraph) -> str:
    """Graphviz source for to_digraph(sg); labels are quoted and escaped."""
    return to_digraph(sg).source
