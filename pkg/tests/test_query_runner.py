"""The shared query runner behind `cli.py route` and the Route Query page."""

import pytest

from modules.graph_core import build_graph, constant, piecewise_constant, static_view
from modules.query_runner import run_query
from modules.routing_td import TdQuery
from modules.state_graph import ExpandOptions

S, U, V, F = 0, 1, 2, 3


class TestTimeDependent:
    def test_state_graph_route(self, fig1):
        doc, route = run_query(fig1, TdQuery(S, F, 0), "state-graph")
        assert doc['status'] == "ok"
        assert doc['arrival'] == 3
        assert route.nodes == (S, U, V, F)

    def test_labels_without_target(self, fig1):
        doc, route = run_query(fig1, TdQuery(S, None, 0), "naive-td")
        assert route is None
        assert doc['labels'] == {'s': 0, 'u': 1, 'v': 1, 'f': 11}

    def test_non_fifo_document_carries_the_witness(self, fig1):
        doc, route = run_query(fig1, TdQuery(S, F, 0), "td-astar")
        assert route is None
        assert doc['status'] == "non_fifo"
        assert doc['fifo']['non_fifo_edges'][0]['witness'] == {'t1': 1, 't2': 2, 'a1': 11, 'a2': 3}

    def test_truncation_stats(self, fig1):
        doc, _ = run_query(fig1, TdQuery(S, F, 0), "state-graph", ExpandOptions(max_states=3))
        assert doc['status'] == "truncated"
        assert doc['stats']['states'] == 3
        assert set(doc['stats']) == {'states', 'transitions', 'horizon'}

    def test_waiting_option_reaches_the_solver(self):
        g = build_graph(2, [(0, 1, piecewise_constant([(0, 10), (5, 1)]))])
        q = TdQuery(0, 1, 0)
        assert run_query(g, q, "state-graph")[0]['arrival'] == 10
        doc, route = run_query(g, q, "state-graph", ExpandOptions(allow_wait=True))
        assert doc['arrival'] == 6
        assert route.edge_events[0].depart == 5

    def test_static_graph_is_refused(self, triangle):
        doc, route = run_query(static_view(triangle), TdQuery(0, 1, 0), "td-fifo")
        assert route is None
        assert doc['status'] == "invalid_query"


class TestStatic:
    def test_graph_is_frozen_at_departure(self, fig3_k4):
        early, _ = run_query(fig3_k4, TdQuery(0, 2, 0), "dijkstra")
        late, _ = run_query(fig3_k4, TdQuery(0, 2, 4), "dijkstra")
        assert early['length'] == 8
        assert late['length'] == 1

    @pytest.mark.parametrize("algo", ["dijkstra", "bellman-ford", "astar", "bidir"])
    def test_static_graph_is_used_as_is(self, triangle, algo):
        doc, route = run_query(static_view(triangle), TdQuery(0, 1, 0), algo)
        assert route is None
        assert doc['length'] == 3
        assert doc['nodes'] == ['s', 'b', 'a']

    def test_unreachable(self, triangle):
        doc, _ = run_query(triangle, TdQuery(1, 0, 0), "bidir")
        assert doc['status'] == "unreachable"

    def test_invalid_graph_document(self):
        g = build_graph(2, [(0, 1, constant(1)), (1, 5, constant(1))])
        doc, _ = run_query(g, TdQuery(0, 1, 0), "td-fifo")
        assert doc['status'] == "invalid_graph"
        doc, _ = run_query(g, TdQuery(0, 1, 0), "dijkstra")
        assert doc['status'] == "invalid_graph"


def test_unknown_algorithm(fig1):
    with pytest.raises(ValueError):
        run_query(fig1, TdQuery(S, F, 0), "teleport")
