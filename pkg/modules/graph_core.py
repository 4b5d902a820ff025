"""
TEMPO Route - Graph Core
========================
Directed graphs whose edges carry travel-time functions c(uv, t).

Time is exact integer ticks. A travel-time function is one of:
- Constant:           c(t) = w
- PiecewiseConstant:  breakpoints (start, value), first start = 0
- PiecewiseLinear:    samples (t, value), linear in between, held
                      constant before the first and after the last sample

Everything here is immutable and safe to share between concurrent queries.
"""

import logging
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from modules.errors import (
    InvalidGraphError, InvalidQueryError, NegativeDurationError, NonFifoEdgeError, TickOverflowError
)
from utils.constants import HORIZON_FACTOR, MAX_TICKS, TICK_SIZE
from utils.helpers import get_horizon_override

logger = logging.getLogger(__name__)

TimePoint = int
DurationTicks = int
NodeId = int
EdgeId = int

CONSTANT = "Constant"
PIECEWISE_CONSTANT = "PiecewiseConstant"
PIECEWISE_LINEAR = "PiecewiseLinear"
FUNCTION_KINDS = (CONSTANT, PIECEWISE_CONSTANT, PIECEWISE_LINEAR)


def advance(t: TimePoint, d: DurationTicks) -> TimePoint:
    """t + d, refusing to leave the representable tick range."""
    result = t + d
    if result > MAX_TICKS or result < 0:
        raise TickOverflowError(t, d)
    return result


# ============================================================================
# TRAVEL-TIME FUNCTIONS
# ============================================================================

@dataclass(frozen=True)
class TravelTimeFunction:
    kind: str
    times: Tuple[int, ...]
    values: Tuple[int, ...]

    @property
    def points(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(zip(self.times, self.values))

    @property
    def max_value(self) -> int:
        return max(self.values)

    @property
    def last_breakpoint(self) -> int:
        return self.times[-1]


def _split_points(points: Iterable[Tuple[int, int]]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    pairs = [(int(t), int(v)) for t, v in points]
    if not pairs:
        raise ValueError("travel-time function needs at least one point")
    return tuple(t for t, _ in pairs), tuple(v for _, v in pairs)


def constant(value: int) -> TravelTimeFunction:
    return TravelTimeFunction(CONSTANT, (0,), (int(value),))


def piecewise_constant(breakpoints: Iterable[Tuple[int, int]]) -> TravelTimeFunction:
    times, values = _split_points(breakpoints)
    return TravelTimeFunction(PIECEWISE_CONSTANT, times, values)


def piecewise_linear(samples: Iterable[Tuple[int, int]]) -> TravelTimeFunction:
    times, values = _split_points(samples)
    return TravelTimeFunction(PIECEWISE_LINEAR, times, values)


def _round_half_away(num: int, den: int) -> int:
    """num / den rounded to nearest integer, ties away from zero (den > 0)."""
    if num >= 0:
        return (2 * num + den) // (2 * den)
    return -((-2 * num + den) // (2 * den))


def _linear_piece(f: TravelTimeFunction, t: TimePoint) -> Optional[int]:
    """Index i of the piece [times[i], times[i+1]) holding t, or None outside the samples."""
    if t <= f.times[0] or t >= f.times[-1]:
        return None
    i = bisect_right(f.times, t) - 1
    if f.times[i + 1] <= f.times[i]:
        return None
    return i


def evaluate(f: TravelTimeFunction, t: TimePoint) -> DurationTicks:
    """Travel time when departing at t. Linear pieces round to the nearest tick."""
    if f.kind == CONSTANT:
        return f.values[0]

    if f.kind == PIECEWISE_CONSTANT:
        i = bisect_right(f.times, t) - 1
        return f.values[max(i, 0)]

    i = _linear_piece(f, t)
    if i is None:
        return f.values[0] if t <= f.times[0] else f.values[-1]
    span = f.times[i + 1] - f.times[i]
    num = f.values[i] * span + (f.values[i + 1] - f.values[i]) * (t - f.times[i])
    return _round_half_away(num, span)


def exact_value(f: TravelTimeFunction, t: TimePoint) -> Fraction:
    """Unrounded c(t); equals evaluate() except inside linear pieces."""
    if f.kind != PIECEWISE_LINEAR:
        return Fraction(evaluate(f, t))
    i = _linear_piece(f, t)
    if i is None:
        return Fraction(f.values[0] if t <= f.times[0] else f.values[-1])
    span = f.times[i + 1] - f.times[i]
    return Fraction(f.values[i]) + Fraction((f.values[i + 1] - f.values[i]) * (t - f.times[i]), span)


def min_travel_time(f: TravelTimeFunction) -> DurationTicks:
    """Free-flow time: minimum of c over all departures (extrema sit on breakpoints)."""
    return min(f.values)


# ============================================================================
# FIFO ANALYSIS
# ============================================================================

class FifoWitness(NamedTuple):
    t1: TimePoint
    t2: TimePoint
    a1: TimePoint
    a2: TimePoint


@dataclass(frozen=True)
class FifoReport:
    is_fifo: bool
    witness: Optional[FifoWitness] = None


def _witness(f: TravelTimeFunction, t1: TimePoint, t2: TimePoint) -> FifoWitness:
    return FifoWitness(t1, t2, t1 + evaluate(f, t1), t2 + evaluate(f, t2))


def check_fifo(f: TravelTimeFunction) -> FifoReport:
    """
    Segment analysis of the FIFO property at tick granularity.

    Arrival t + c(t) must strictly increase between consecutive ticks.
    Constant pieces always satisfy this; a linear piece does iff its slope
    is > -1; a jump at breakpoint b needs b + c(b) > (b - 1) + c(b - 1).
    """
    if f.kind == CONSTANT:
        return FifoReport(True)

    if f.kind == PIECEWISE_CONSTANT:
        for i in range(1, len(f.times)):
            b = f.times[i]
            if b + f.values[i] <= (b - 1) + f.values[i - 1]:
                return FifoReport(False, _witness(f, b - 1, b))
        return FifoReport(True)

    for i in range(len(f.times) - 1):
        span = f.times[i + 1] - f.times[i]
        drop = f.values[i + 1] - f.values[i]
        # slope drop / span > -1
        if span > 0 and drop + span <= 0:
            t1 = f.times[i]
            return FifoReport(False, _witness(f, t1, t1 + 1))
    return FifoReport(True)


# ============================================================================
# GRAPH
# ============================================================================

class Edge(NamedTuple):
    source: NodeId
    target: NodeId
    cost: TravelTimeFunction


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: Tuple[Edge, ...]
    names: Tuple[str, ...] = ()
    tick_size: int = TICK_SIZE

    def __post_init__(self):
        object.__setattr__(self, 'edges', tuple(Edge(*e) for e in self.edges))
        names = tuple(self.names) or tuple(str(i) for i in range(self.node_count))
        object.__setattr__(self, 'names', names)

    @cached_property
    def _adjacency(self) -> Tuple[Tuple[Tuple[EdgeId, ...], ...], Tuple[Tuple[EdgeId, ...], ...]]:
        out_lists: List[List[EdgeId]] = [[] for _ in range(max(self.node_count, 0))]
        in_lists: List[List[EdgeId]] = [[] for _ in range(max(self.node_count, 0))]
        for eid, edge in enumerate(self.edges):
            if 0 <= edge.source < self.node_count and 0 <= edge.target < self.node_count:
                out_lists[edge.source].append(eid)
                in_lists[edge.target].append(eid)
        return tuple(map(tuple, out_lists)), tuple(map(tuple, in_lists))

    @cached_property
    def fifo_reports(self) -> Dict[EdgeId, FifoReport]:
        return {eid: check_fifo(edge.cost) for eid, edge in enumerate(self.edges)}

    @cached_property
    def validation(self) -> "ValidationReport":
        return validate_graph(self)

    def out_edges(self, node: NodeId) -> Tuple[EdgeId, ...]:
        return self._adjacency[0][node]

    def in_edges(self, node: NodeId) -> Tuple[EdgeId, ...]:
        return self._adjacency[1][node]

    def name_of(self, node: NodeId) -> str:
        if 0 <= node < len(self.names):
            return self.names[node]
        return str(node)

    def edge_label(self, eid: EdgeId) -> str:
        edge = self.edges[eid]
        return f"{self.name_of(edge.source)}->{self.name_of(edge.target)}"

    def node_id(self, token) -> NodeId:
        """Resolve a symbolic name or integer id to a NodeId."""
        token = str(token)
        if token in self.names:
            return self.names.index(token)
        try:
            node = int(token)
        except ValueError:
            raise InvalidQueryError(f"Unknown node {token!r}")
        if not 0 <= node < self.node_count:
            raise InvalidQueryError(f"Node {node} outside 0..{self.node_count - 1}")
        return node


def build_graph(node_count: int, edges: Iterable[Tuple[NodeId, NodeId, TravelTimeFunction]],
                names: Optional[Sequence[str]] = None, tick_size: int = TICK_SIZE) -> Graph:
    return Graph(node_count, tuple(Edge(*e) for e in edges), tuple(names or ()), tick_size)


def check_node(g, node: NodeId, role: str = "node"):
    if not isinstance(node, int) or not 0 <= node < g.node_count:
        raise InvalidQueryError(f"{role} {node!r} outside 0..{g.node_count - 1}")


def require_non_negative(g: Graph):
    for eid, edge in enumerate(g.edges):
        lowest = min(edge.cost.values)
        if lowest < 0:
            raise NegativeDurationError(eid, lowest)


def graph_fifo_reports(g: Graph) -> Dict[EdgeId, FifoReport]:
    """FIFO report per edge, computed once per graph."""
    return g.fifo_reports


def require_fifo(g: Graph):
    """Raise NonFifoEdgeError for the first edge that breaks FIFO."""
    for eid, report in graph_fifo_reports(g).items():
        if not report.is_fifo:
            logger.info(f"Edge {g.edge_label(eid)} rejected: FIFO witness {report.witness}")
            raise NonFifoEdgeError(eid, report, g.edge_label(eid))


def default_horizon(g: Graph, t0: TimePoint) -> TimePoint:
    """t0 + HORIZON_FACTOR * (sum of per-edge max values), unless overridden."""
    override = get_horizon_override()
    if override is not None:
        return max(override, t0)
    total = sum(edge.cost.max_value for edge in g.edges)
    return advance(t0, HORIZON_FACTOR * max(1, total))


# ============================================================================
# VALIDATION
# ============================================================================

class ValidationIssue(NamedTuple):
    kind: str
    message: str
    edge: Optional[EdgeId] = None


@dataclass(frozen=True)
class ValidationReport:
    issues: Tuple[ValidationIssue, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.issues


def _function_issues(f: TravelTimeFunction, eid: EdgeId) -> List[ValidationIssue]:
    issues = []
    if f.kind not in FUNCTION_KINDS:
        issues.append(ValidationIssue('kind', f"edge {eid}: unknown function kind {f.kind!r}", eid))
        return issues
    if len(f.times) != len(f.values) or not f.times:
        issues.append(ValidationIssue('breakpoints', f"edge {eid}: empty or ragged point list", eid))
        return issues
    if any(t < 0 for t in f.times):
        issues.append(ValidationIssue('breakpoints', f"edge {eid}: negative breakpoint time", eid))
    if any(b <= a for a, b in zip(f.times, f.times[1:])):
        issues.append(ValidationIssue('breakpoints', f"edge {eid}: breakpoint times not strictly increasing", eid))
    if f.kind == PIECEWISE_CONSTANT and f.times[0] != 0:
        issues.append(ValidationIssue('breakpoints', f"edge {eid}: first breakpoint must start at 0", eid))
    if any(v < 0 for v in f.values):
        issues.append(ValidationIssue('negative_duration', f"edge {eid}: negative travel time", eid))
    return issues


def _shape_issues(g) -> List[ValidationIssue]:
    issues: List[ValidationIssue] = []
    if g.node_count < 1:
        issues.append(ValidationIssue('nodes', "graph needs at least one node"))
    if len(g.names) != g.node_count:
        issues.append(ValidationIssue('names', f"{len(g.names)} names for {g.node_count} nodes"))
    elif len(set(g.names)) != len(g.names):
        issues.append(ValidationIssue('names', "node names are not unique"))
    for eid, edge in enumerate(g.edges):
        for end in (edge.source, edge.target):
            if not isinstance(end, int) or not 0 <= end < g.node_count:
                issues.append(ValidationIssue(
                    'endpoint', f"edge {eid}: endpoint {end} outside 0..{g.node_count - 1}", eid))
    return issues


def validate_graph(g: Graph) -> ValidationReport:
    """Report every violated Graph / TravelTimeFunction invariant."""
    issues = _shape_issues(g)
    if g.tick_size < 1:
        issues.append(ValidationIssue('tick', f"tick size {g.tick_size} must be positive"))
    for eid, edge in enumerate(g.edges):
        issues.extend(_function_issues(edge.cost, eid))
    return ValidationReport(tuple(issues))


def validate_static_graph(g: "StaticGraph") -> ValidationReport:
    return ValidationReport(tuple(_shape_issues(g)))


def require_valid(g):
    """Raise InvalidGraphError unless the graph is structurally sound.

    Negative durations are not reported here; require_non_negative covers them.
    """
    structural = tuple(i for i in g.validation.issues if i.kind != 'negative_duration')
    if structural:
        logger.info(f"Graph rejected: {len(structural)} issue(s), first: {structural[0].message}")
        raise InvalidGraphError(ValidationReport(structural))


# ============================================================================
# STATIC VIEW
# ============================================================================

class StaticEdge(NamedTuple):
    source: NodeId
    target: NodeId
    weight: int


@dataclass(frozen=True)
class StaticGraph:
    """Time-independent costs; weights may be negative (Bellman-Ford only)."""
    node_count: int
    edges: Tuple[StaticEdge, ...]
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'edges', tuple(StaticEdge(*e) for e in self.edges))
        names = tuple(self.names) or tuple(str(i) for i in range(self.node_count))
        object.__setattr__(self, 'names', names)

    @cached_property
    def _adjacency(self):
        out_lists: List[List[EdgeId]] = [[] for _ in range(max(self.node_count, 0))]
        in_lists: List[List[EdgeId]] = [[] for _ in range(max(self.node_count, 0))]
        for eid, edge in enumerate(self.edges):
            if 0 <= edge.source < self.node_count and 0 <= edge.target < self.node_count:
                out_lists[edge.source].append(eid)
                in_lists[edge.target].append(eid)
        return tuple(map(tuple, out_lists)), tuple(map(tuple, in_lists))

    @cached_property
    def validation(self) -> ValidationReport:
        return validate_static_graph(self)

    def out_edges(self, node: NodeId) -> Tuple[EdgeId, ...]:
        return self._adjacency[0][node]

    def in_edges(self, node: NodeId) -> Tuple[EdgeId, ...]:
        return self._adjacency[1][node]

    def reversed(self) -> "StaticGraph":
        """Same edge ids, every edge pointing the other way."""
        return StaticGraph(self.node_count,
                           tuple(StaticEdge(e.target, e.source, e.weight) for e in self.edges),
                           self.names)

    def name_of(self, node: NodeId) -> str:
        if 0 <= node < len(self.names):
            return self.names[node]
        return str(node)


def build_static_graph(node_count: int, edges: Iterable[Tuple[NodeId, NodeId, int]],
                       names: Optional[Sequence[str]] = None) -> StaticGraph:
    return StaticGraph(node_count, tuple(StaticEdge(*e) for e in edges), tuple(names or ()))


def static_view(g: Graph, at: Optional[TimePoint] = None) -> StaticGraph:
    """Freeze every edge at departure time `at`, or at its free-flow minimum."""
    edges = []
    for edge in g.edges:
        weight = min_travel_time(edge.cost) if at is None else evaluate(edge.cost, at)
        edges.append(StaticEdge(edge.source, edge.target, weight))
    return StaticGraph(g.node_count, tuple(edges), g.names)
