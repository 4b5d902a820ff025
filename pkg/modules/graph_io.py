"""
TEMPO Route - Graph Files and Result Documents
==============================================
Line-oriented graph text format:

    # comment
    graph <node_count> <edge_count>
    tick <tick_size>                  (optional, default 1)
    node <name>                       (optional; all or none, declaration order = id)
    edge <from> <to> const <w>
    edge <from> <to> pwc <t>:<v>,<t>:<v>,...
    edge <from> <to> pwl <t>:<v>,<t>:<v>,...

Endpoints are node names or integer ids. Result documents are JSON with a
fixed key order so identical runs produce identical bytes.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from modules.errors import ParseError, RoutingError
from modules.graph_core import (
    CONSTANT, Graph, NodeId, StaticGraph, TimePoint, TravelTimeFunction,
    build_graph, constant, piecewise_constant, piecewise_linear, static_view, validate_graph
)
from modules.oracle_corpus import corpus_by_name
from modules.routing_td import TdQuery
from utils.constants import COST_KINDS, RESULT_SCHEMA, TICK_SIZE
from utils.helpers import DATA_DIR, GRAPH_SUFFIX

logger = logging.getLogger(__name__)

_KIND_KEYWORDS = {kind: keyword for keyword, kind in COST_KINDS.items()}


# ============================================================================
# PARSING
# ============================================================================

def _column(raw: str, token: str, start: int = 0) -> int:
    """1-based column of token in raw, searching from start."""
    index = raw.find(token, start)
    return index + 1 if index >= 0 else 1


def _int(token: str, line_no: int, raw: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_no, _column(raw, token), f"{what} {token!r} is not an integer")


def _parse_points(token: str, line_no: int, raw: str) -> List[Tuple[int, int]]:
    points = []
    for item in token.split(','):
        if ':' not in item:
            raise ParseError(line_no, _column(raw, item), f"expected <time>:<value>, got {item!r}")
        t, v = item.split(':', 1)
        points.append((_int(t, line_no, raw, "time"), _int(v, line_no, raw, "value")))
    return points


def _parse_cost(fields: List[str], line_no: int, raw: str) -> TravelTimeFunction:
    if len(fields) != 2:
        raise ParseError(line_no, 1, "edge needs: edge <from> <to> <kind> <spec>")
    keyword, spec = fields
    if keyword not in COST_KINDS:
        raise ParseError(line_no, _column(raw, keyword),
                         f"unknown cost kind {keyword!r} (expected {', '.join(COST_KINDS)})")
    if keyword == "const":
        return constant(_int(spec, line_no, raw, "cost"))
    points = _parse_points(spec, line_no, raw)
    return piecewise_constant(points) if keyword == "pwc" else piecewise_linear(points)


def _parse(text: str, allow_negative: bool = False) -> Graph:
    node_count = edge_count = None
    header_line = 0
    tick_size = TICK_SIZE
    names: List[str] = []
    pending: List[Tuple[int, str, str, str, TravelTimeFunction]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split('#', 1)[0]
        fields = content.split()
        if not fields:
            continue
        keyword, rest = fields[0], fields[1:]

        if keyword == "graph":
            if node_count is not None:
                raise ParseError(line_no, 1, "duplicate graph header")
            if len(rest) != 2:
                raise ParseError(line_no, 1, "header needs: graph <node_count> <edge_count>")
            node_count = _int(rest[0], line_no, raw, "node count")
            edge_count = _int(rest[1], line_no, raw, "edge count")
            header_line = line_no
            if node_count < 1:
                raise ParseError(line_no, _column(raw, rest[0]), "graph needs at least one node")
            continue

        if node_count is None:
            raise ParseError(line_no, 1, f"{keyword!r} before the graph header")

        if keyword == "tick":
            if len(rest) != 1:
                raise ParseError(line_no, 1, "tick needs: tick <size>")
            tick_size = _int(rest[0], line_no, raw, "tick size")
            if tick_size < 1:
                raise ParseError(line_no, _column(raw, rest[0]), "tick size must be positive")
        elif keyword == "node":
            if len(rest) != 1:
                raise ParseError(line_no, 1, "node needs: node <name>")
            if rest[0] in names:
                raise ParseError(line_no, _column(raw, rest[0], 4), f"duplicate node {rest[0]!r}")
            if len(names) >= node_count:
                raise ParseError(line_no, 1, f"more than {node_count} node declarations")
            names.append(rest[0])
        elif keyword == "edge":
            if len(rest) < 2:
                raise ParseError(line_no, 1, "edge needs: edge <from> <to> <kind> <spec>")
            pending.append((line_no, raw, rest[0], rest[1], _parse_cost(rest[2:], line_no, raw)))
        else:
            raise ParseError(line_no, _column(raw, keyword), f"unknown record {keyword!r}")

    if node_count is None:
        raise ParseError(max(len(text.splitlines()), 1), 1, "missing graph header")
    if names and len(names) != node_count:
        raise ParseError(header_line, 1, f"{len(names)} node declarations for {node_count} nodes")
    if len(pending) != edge_count:
        raise ParseError(header_line, 1, f"header announces {edge_count} edges, found {len(pending)}")

    names = names or [str(i) for i in range(node_count)]
    index = {name: i for i, name in enumerate(names)}

    def resolve(token: str, line_no: int, raw: str, start: int) -> NodeId:
        if token in index:
            return index[token]
        try:
            node = int(token)
        except ValueError:
            raise ParseError(line_no, _column(raw, token, start), f"unknown node {token!r}")
        if not 0 <= node < node_count:
            raise ParseError(line_no, _column(raw, token, start),
                             f"node {node} outside 0..{node_count - 1}")
        return node

    edges = []
    edge_lines = []
    for line_no, raw, source, target, cost in pending:
        src = resolve(source, line_no, raw, 4)
        dst = resolve(target, line_no, raw, _column(raw, source, 4) + len(source) - 1)
        edges.append((src, dst, cost))
        edge_lines.append(line_no)

    graph = build_graph(node_count, edges, names, tick_size)
    report = validate_graph(graph)
    for issue in report.issues:
        if allow_negative and issue.kind == 'negative_duration':
            continue
        line_no = edge_lines[issue.edge] if issue.edge is not None else header_line
        raise ParseError(line_no, 1, issue.message)

    logger.debug(f"Parsed graph: {node_count} nodes, {len(edges)} edges, tick {tick_size}")
    return graph


def parse_graph(text: str) -> Graph:
    """Parse and validate a graph file; travel times must be non-negative."""
    return _parse(text)


def parse_static_graph(text: str, at: Optional[TimePoint] = None) -> StaticGraph:
    """Parse a graph file into a static graph frozen at `at`; negative costs allowed."""
    return static_view(_parse(text, allow_negative=True), at)


def _format_cost(f: TravelTimeFunction) -> str:
    if f.kind == CONSTANT:
        return f"const {f.values[0]}"
    points = ",".join(f"{t}:{v}" for t, v in f.points)
    return f"{_KIND_KEYWORDS[f.kind]} {points}"


def serialize_graph(g: Graph, comment: str = "") -> str:
    """Graph file text; parse_graph(serialize_graph(g)) == g."""
    lines = []
    if comment:
        lines.extend(f"# {row}" for row in comment.splitlines())
    lines.append(f"graph {g.node_count} {len(g.edges)}")
    if g.tick_size != TICK_SIZE:
        lines.append(f"tick {g.tick_size}")
    lines.extend(f"node {name}" for name in g.names)
    for edge in g.edges:
        lines.append(f"edge {g.name_of(edge.source)} {g.name_of(edge.target)} {_format_cost(edge.cost)}")
    return "\n".join(lines) + "\n"


# ============================================================================
# LOADING
# ============================================================================

def decode_graph_bytes(data: bytes) -> str:
    """UTF-8 text of a graph file; bad bytes raise ParseError at their line and column."""
    try:
        return data.decode('utf-8')
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        column = e.start - (data.rfind(b"\n", 0, e.start) + 1) + 1
        raise ParseError(line, column, "invalid UTF-8")


def _read_graph_text(token: str) -> str:
    path = Path(token)
    if not path.is_file():
        path = DATA_DIR / f"{token}{GRAPH_SUFFIX}"
        if not path.is_file():
            raise FileNotFoundError(f"No corpus instance or graph file named {token!r}")
    return decode_graph_bytes(path.read_bytes())


def load_graph(token: str) -> Tuple[Graph, Optional[TdQuery]]:
    """Corpus instance by name (with its default query), else a graph file."""
    corpus = corpus_by_name()
    if token in corpus:
        return corpus[token].graph, corpus[token].query
    return parse_graph(_read_graph_text(token)), None


def load_static_graph(token: str, at: Optional[TimePoint] = None) -> StaticGraph:
    corpus = corpus_by_name()
    if token in corpus:
        return static_view(corpus[token].graph, at)
    return parse_static_graph(_read_graph_text(token), at)


# ============================================================================
# RESULT DOCUMENTS
# ============================================================================

def _witness_dict(witness) -> Optional[Dict[str, int]]:
    if witness is None:
        return None
    return {'t1': witness.t1, 't2': witness.t2, 'a1': witness.a1, 'a2': witness.a2}


def fifo_summary(g: Graph, edges: Optional[Sequence[int]] = None) -> Dict[str, Any]:
    """Checked edge count plus one entry (with witness) per non-FIFO edge."""
    checked = range(len(g.edges)) if edges is None else edges
    violations = []
    for eid in checked:
        report = g.fifo_reports[eid]
        if not report.is_fifo:
            violations.append({'edge': eid, 'label': g.edge_label(eid),
                               'witness': _witness_dict(report.witness)})
    return {'checked': len(checked), 'non_fifo_edges': violations}


def build_result_document(g, query: TdQuery, algorithm: str, status: str = "ok", *,
                          message: str = "", arrival: Optional[int] = None,
                          length: Optional[int] = None, nodes: Sequence[NodeId] = (),
                          edge_events: Sequence = (), labels: Optional[Dict[NodeId, int]] = None,
                          stats: Optional[Dict[str, int]] = None,
                          fifo: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Result document with a stable key order. `g` is a Graph or StaticGraph;
    nodes are echoed by name, every number is an integer tick count.
    """
    events = []
    for ev in edge_events:
        edge = g.edges[ev.edge]
        events.append({
            'edge': ev.edge,
            'from': g.name_of(edge.source),
            'to': g.name_of(edge.target),
            'depart': ev.depart,
            'arrive': ev.arrive,
        })
    return {
        'schema': RESULT_SCHEMA,
        'query': {
            'source': g.name_of(query.source),
            'target': g.name_of(query.target) if query.target is not None else None,
            't0': query.t0,
        },
        'algorithm': algorithm,
        'status': status,
        'message': message,
        'arrival': arrival,
        'length': length,
        'nodes': [g.name_of(n) for n in nodes],
        'edge_events': events,
        'labels': {g.name_of(n): labels[n] for n in sorted(labels)} if labels else {},
        'stats': {k: int(v) for k, v in (stats or {}).items()},
        'fifo': fifo,
        'tick_size': getattr(g, 'tick_size', TICK_SIZE),
    }


def error_document(g, query: TdQuery, algorithm: str, error: RoutingError, **extra) -> Dict[str, Any]:
    return build_result_document(g, query, algorithm, error.status, message=str(error), **extra)


def render_document(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
