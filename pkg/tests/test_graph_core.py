"""Travel-time functions, FIFO analysis, graph structure and validation."""

from fractions import Fraction

import numpy as np
import pytest

from modules.errors import InvalidGraphError, InvalidQueryError, NonFifoEdgeError, TickOverflowError
from modules.graph_core import (
    FifoWitness, Graph, StaticGraph, advance, build_graph, build_static_graph, check_fifo,
    constant, default_horizon, evaluate, exact_value, min_travel_time, piecewise_constant,
    piecewise_linear, require_fifo, require_valid, static_view, validate_graph
)
from modules.oracle_corpus import random_function
from utils.constants import MAX_TICKS

S, U, V, F = 0, 1, 2, 3


class TestEvaluate:
    def test_constant_ignores_departure(self):
        f = constant(7)
        assert [evaluate(f, t) for t in (0, 3, 10_000)] == [7, 7, 7]

    def test_piecewise_constant_steps_at_breakpoints(self, fig1):
        vf = fig1.edges[3].cost
        assert [evaluate(vf, t) for t in (0, 1, 2, 3, 100)] == [10, 10, 1, 1, 1]

    def test_piecewise_linear_interpolates_and_holds(self):
        f = piecewise_linear([(0, 10), (20, 0)])
        assert evaluate(f, 0) == 10
        assert evaluate(f, 10) == 5
        assert evaluate(f, 20) == 0
        assert evaluate(f, 25) == 0

    def test_piecewise_linear_rounds_half_away_from_zero(self):
        f = piecewise_linear([(0, 10), (20, 0)])
        # 9.5 and 7.5 round up
        assert evaluate(f, 1) == 10
        assert evaluate(f, 5) == 8
        assert exact_value(f, 5) == Fraction(15, 2)

    def test_piecewise_linear_before_first_sample(self):
        f = piecewise_linear([(4, 3), (8, 7)])
        assert evaluate(f, 0) == 3
        assert evaluate(f, 6) == 5

    def test_min_travel_time(self, fig1):
        assert min_travel_time(fig1.edges[3].cost) == 1
        assert min_travel_time(piecewise_linear([(0, 9), (5, 2), (9, 4)])) == 2


class TestFifo:
    def test_constant_is_fifo(self):
        assert check_fifo(constant(3)).is_fifo

    def test_fig1_drop_is_not_fifo(self, fig1):
        report = check_fifo(fig1.edges[3].cost)
        assert not report.is_fifo
        assert report.witness == FifoWitness(1, 2, 11, 3)

    def test_fig3_drop_witness(self, fig3_k4):
        report = check_fifo(fig3_k4.edges[2].cost)
        assert report.witness == FifoWitness(3, 4, 11, 5)

    def test_non_decreasing_steps_are_fifo(self):
        assert check_fifo(piecewise_constant([(0, 1), (5, 3), (9, 3)])).is_fifo

    def test_gentle_linear_decrease_is_fifo(self):
        f = piecewise_linear([(0, 10), (20, 0)])
        assert check_fifo(f).is_fifo
        exact_arrivals = [t + exact_value(f, t) for t in range(26)]
        assert all(a < b for a, b in zip(exact_arrivals, exact_arrivals[1:]))
        rounded = [t + evaluate(f, t) for t in range(26)]
        assert all(a <= b for a, b in zip(rounded, rounded[1:]))

    def test_steep_linear_decrease_is_not_fifo(self):
        report = check_fifo(piecewise_linear([(0, 10), (2, 0)]))
        assert not report.is_fifo
        assert report.witness == FifoWitness(0, 1, 10, 6)

    def test_slope_minus_one_is_not_fifo(self):
        report = check_fifo(piecewise_linear([(0, 10), (10, 0)]))
        assert not report.is_fifo
        assert report.witness == FifoWitness(0, 1, 10, 10)

    def test_witness_never_arrives_later_for_later_departure(self):
        for f in (piecewise_constant([(0, 20), (3, 2)]), piecewise_linear([(1, 30), (4, 0)])):
            w = check_fifo(f).witness
            assert w.t1 < w.t2 and w.a1 >= w.a2

    def test_require_fifo_names_the_edge(self, fig1, fig1_fifo):
        with pytest.raises(NonFifoEdgeError) as err:
            require_fifo(fig1)
        assert err.value.edge == 3
        assert err.value.label == "v->f"
        require_fifo(fig1_fifo)

    def test_reports_cached_per_graph(self, fig1):
        assert fig1.fifo_reports is fig1.fifo_reports
        assert [r.is_fifo for r in fig1.fifo_reports.values()] == [True, True, True, False]


class TestGraph:
    def test_adjacency(self, fig1):
        assert fig1.out_edges(S) == (0, 1)
        assert fig1.in_edges(V) == (1, 2)
        assert fig1.out_edges(F) == ()

    def test_node_id_resolves_names_and_ids(self, fig1):
        assert fig1.node_id("v") == V
        assert fig1.node_id(3) == F
        with pytest.raises(InvalidQueryError):
            fig1.node_id("9")
        with pytest.raises(InvalidQueryError):
            fig1.node_id("nowhere")

    def test_default_names(self):
        g = build_graph(3, [(0, 1, constant(1))])
        assert g.names == ("0", "1", "2")

    def test_static_view_free_flow_and_frozen(self, fig1):
        assert [e.weight for e in static_view(fig1).edges] == [1, 1, 1, 1]
        assert [e.weight for e in static_view(fig1, at=0).edges] == [1, 1, 1, 10]
        assert static_view(fig1).names == fig1.names

    def test_advance_overflow(self):
        assert advance(5, 3) == 8
        with pytest.raises(TickOverflowError):
            advance(MAX_TICKS, 1)


class TestHorizon:
    def test_default_horizon_scales_with_max_values(self, fig1):
        assert default_horizon(fig1, 0) == 10 * (1 + 1 + 1 + 10)
        assert default_horizon(fig1, 7) == 7 + 130

    def test_empty_graph_horizon(self, single_node):
        assert default_horizon(single_node, 0) == 10

    def test_env_override(self, fig1, monkeypatch):
        monkeypatch.setenv("TEMPO_DEFAULT_HORIZON", "50")
        assert default_horizon(fig1, 0) == 50

    def test_invalid_env_override_is_ignored(self, fig1, monkeypatch):
        monkeypatch.setenv("TEMPO_DEFAULT_HORIZON", "soon")
        assert default_horizon(fig1, 0) == 130


class TestValidation:
    def test_corpus_graph_is_valid(self, fig1, single_node):
        assert validate_graph(fig1).is_valid
        assert validate_graph(single_node).is_valid

    @pytest.mark.parametrize("cost, kind", [
        (piecewise_constant([(1, 3)]), 'breakpoints'),
        (piecewise_linear([(0, 1), (0, 2)]), 'breakpoints'),
        (constant(-1), 'negative_duration'),
    ])
    def test_bad_functions(self, cost, kind):
        report = validate_graph(build_graph(2, [(0, 1, cost)]))
        assert [issue.kind for issue in report.issues] == [kind]
        assert report.issues[0].edge == 0

    def test_endpoint_out_of_range(self):
        report = validate_graph(build_graph(2, [(0, 5, constant(1))]))
        assert [issue.kind for issue in report.issues] == ['endpoint']

    def test_duplicate_names(self):
        report = validate_graph(Graph(2, (), ("a", "a")))
        assert [issue.kind for issue in report.issues] == ['names']

    def test_require_valid_names_the_first_issue(self):
        g = build_graph(2, [(0, 1, constant(1)), (1, 5, constant(1))])
        with pytest.raises(InvalidGraphError) as err:
            require_valid(g)
        assert err.value.status == "invalid_graph"
        assert [issue.kind for issue in err.value.report.issues] == ['endpoint']
        assert "endpoint 5" in str(err.value)
        assert g.out_edges(1) == ()

    def test_require_valid_leaves_negative_costs_to_their_own_check(self):
        require_valid(build_graph(2, [(0, 1, constant(-1))]))

    def test_static_graph_validation(self):
        assert build_static_graph(2, [(0, 1, -4)]).validation.is_valid
        report = build_static_graph(2, [(0, 1, 1), (2, 0, 1)]).validation
        assert [issue.kind for issue in report.issues] == ['endpoint']
        assert report.issues[0].edge == 1
        with pytest.raises(InvalidGraphError):
            require_valid(StaticGraph(2, (), ("a", "a")))


def test_free_flow_time_is_a_lower_bound():
    rng = np.random.default_rng(5)
    for _ in range(200):
        f = random_function(rng, max_value=12, breakpoints=4)
        lowest = min_travel_time(f)
        assert all(lowest <= evaluate(f, t) for t in range(0, 60))
        assert lowest in [evaluate(f, t) for t in f.times]
