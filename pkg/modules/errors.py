"""
TEMPO Route - Engine Errors
==========================
Every failure the engine reports is a RoutingError subclass.
Report-style operations (validation, FIFO checks, heuristic checks)
return reports instead of raising.
"""

from typing import Optional, Sequence


class RoutingError(Exception):
    """Base class for all engine errors."""

    status = "error"


class InvalidQueryError(RoutingError):
    """Query references nodes outside the graph or misses a required target."""

    status = "invalid_query"

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class InvalidGraphError(RoutingError):
    """Graph fails structural validation."""

    status = "invalid_graph"

    def __init__(self, report):
        first = report.issues[0].message if report.issues else "invalid graph"
        super().__init__(f"Invalid graph: {first}")
        self.report = report


class NegativeCostError(RoutingError):
    """A static search that requires non-negative costs met a negative one."""

    status = "negative_cost"

    def __init__(self, edge: int, cost: int):
        super().__init__(f"Edge {edge} has negative cost {cost}")
        self.edge = edge
        self.cost = cost


class NegativeDurationError(RoutingError):
    """A travel-time function takes a negative value."""

    status = "negative_duration"

    def __init__(self, edge: int, value: int):
        super().__init__(f"Edge {edge} has negative travel time {value}")
        self.edge = edge
        self.value = value


class NegativeCycleError(RoutingError):
    """Bellman-Ford found a negative cycle reachable from the source."""

    status = "negative_cycle"

    def __init__(self, nodes: Sequence[int], edges: Sequence[int], total: int):
        super().__init__(f"Negative cycle {list(nodes)} of total cost {total}")
        self.nodes = tuple(nodes)
        self.edges = tuple(edges)
        self.total = total


class UnreachableError(RoutingError):
    """No path from source to target."""

    status = "unreachable"

    def __init__(self, source: int, target: int):
        super().__init__(f"Node {target} is unreachable from node {source}")
        self.source = source
        self.target = target


class NonFifoEdgeError(RoutingError):
    """A FIFO-only search was given an edge that violates FIFO."""

    status = "non_fifo"

    def __init__(self, edge: int, report, label: Optional[str] = None):
        name = label or f"edge {edge}"
        super().__init__(f"{name} violates FIFO: {report.witness}")
        self.edge = edge
        self.report = report
        self.label = label


class TruncatedError(RoutingError):
    """Expansion hit a cap before the answer was certain."""

    status = "truncated"

    def __init__(self, stats):
        super().__init__(
            f"Expansion truncated after {stats.state_count} states "
            f"(horizon {stats.horizon}); result unknown"
        )
        self.stats = stats


class ParseError(RoutingError):
    """Graph text could not be parsed."""

    status = "parse_error"

    def __init__(self, line: int, column: int, reason: str):
        super().__init__(f"line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class TooLargeError(RoutingError):
    """Brute-force oracle refused a graph above its size guard."""

    status = "too_large"

    def __init__(self, node_count: int, limit: int):
        super().__init__(f"Graph has {node_count} nodes; oracle limit is {limit}")
        self.node_count = node_count
        self.limit = limit


class TickOverflowError(RoutingError):
    """TimePoint arithmetic exceeded the representable range."""

    status = "tick_overflow"

    def __init__(self, time: int, duration: int):
        super().__init__(f"Time {time} + {duration} ticks overflows")
        self.time = time
        self.duration = duration
