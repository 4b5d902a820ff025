"""Time-dependent searches: the counterexample, FIFO soundness and subpath optimality."""

import numpy as np
import pytest

from modules.errors import (
    InvalidGraphError, InvalidQueryError, NonFifoEdgeError, TruncatedError, UnreachableError
)
from modules.graph_core import build_graph, constant
from modules.oracle_corpus import OracleOptions, RandomSpec, brute_force_fastest, gen_random
from modules.routing_td import (
    EdgeEvent, RouteResult, TdQuery, audit_route, extract_route, free_flow_heuristic,
    naive_td_dijkstra, td_astar, td_dijkstra_fifo
)
from modules.state_graph import ExpandOptions, expand, solve_via_state_graph

S, U, V, F = 0, 1, 2, 3
HORIZON = 300


class TestCounterexample:
    def test_naive_relaxation_arrives_at_eleven(self, fig1):
        times = naive_td_dijkstra(fig1, TdQuery(S, F, 0))
        assert times.arrival == {S: 0, U: 1, V: 1, F: 11}
        route = extract_route(times, F)
        assert route.nodes == (S, V, F)
        assert route.edge_events == (EdgeEvent(1, 0, 1), EdgeEvent(3, 1, 11))
        assert audit_route(fig1, route) == []

    def test_fifo_search_refuses(self, fig1):
        with pytest.raises(NonFifoEdgeError) as err:
            td_dijkstra_fifo(fig1, TdQuery(S, F, 0))
        assert err.value.edge == 3
        with pytest.raises(NonFifoEdgeError):
            td_astar(fig1, TdQuery(S, F, 0))

    def test_optimal_prefix_is_not_fastest(self, fig1):
        route = solve_via_state_graph(fig1, TdQuery(S, F, 0))
        assert route.arrival == 3
        assert route.nodes == (S, U, V, F)
        assert route.prefix_arrivals() == [(S, 0), (U, 1), (V, 2), (F, 3)]
        # the prefix (s, u, v) reaches v at 2 although v is reachable at 1
        assert naive_td_dijkstra(fig1, TdQuery(S, None, 0)).arrival[V] == 1
        assert brute_force_fastest(fig1, S, V, 0).arrival == 1


class TestFifoSearches:
    def test_fig1_fifo_variant(self, fig1_fifo):
        q = TdQuery(S, F, 0)
        assert td_dijkstra_fifo(fig1_fifo, q).arrival[F] == 11
        route = td_astar(fig1_fifo, q)
        assert route.arrival == 11
        assert route.nodes == (S, V, F)
        assert audit_route(fig1_fifo, route) == []

    def test_departure_time_shifts_arrivals(self, fig1_fifo):
        assert td_dijkstra_fifo(fig1_fifo, TdQuery(S, None, 5)).arrival == {S: 5, U: 6, V: 6, F: 16}

    def test_free_flow_heuristic(self, fig1_fifo):
        h = free_flow_heuristic(fig1_fifo, V)
        assert h(S) == 1 and h(U) == 1 and h(V) == 0
        assert h(F) is None

    def test_unreachable(self, fig1_fifo):
        times = td_dijkstra_fifo(fig1_fifo, TdQuery(F, S, 0))
        assert times.arrival == {F: 0}
        with pytest.raises(UnreachableError):
            extract_route(times, S)
        with pytest.raises(UnreachableError):
            td_astar(fig1_fifo, TdQuery(F, S, 0))

    def test_source_is_target(self, fig1_fifo):
        route = td_astar(fig1_fifo, TdQuery(V, V, 4))
        assert route.nodes == (V,) and route.arrival == 4
        assert route.prefix_arrivals() == [(V, 4)]

    def test_query_validation(self, fig1_fifo):
        with pytest.raises(InvalidQueryError):
            td_dijkstra_fifo(fig1_fifo, TdQuery(S, None, -1))
        with pytest.raises(InvalidQueryError):
            td_astar(fig1_fifo, TdQuery(S, None, 0))
        with pytest.raises(InvalidQueryError):
            naive_td_dijkstra(fig1_fifo, TdQuery(7, None, 0))


def test_audit_catches_tampered_route(fig1_fifo):
    route = td_astar(fig1_fifo, TdQuery(S, F, 0))
    bad = RouteResult(route.nodes, route.edge_events[:1] + (EdgeEvent(3, 1, 5),), 5)
    problems = audit_route(fig1_fifo, bad)
    assert any("edge gives 11" in p for p in problems)


def _random_instance(seed: int):
    rng = np.random.default_rng(seed)
    nodes = int(rng.integers(2, 9))
    spec = RandomSpec(nodes=nodes, edge_prob=0.35, fifo=True, max_value=30,
                      breakpoints=3, seed=seed, max_edges=20)
    g = gen_random(spec).graph
    queries = [TdQuery(int(rng.integers(0, nodes)), int(rng.integers(0, nodes)), int(rng.integers(0, 61)))
               for _ in range(3)]
    return g, queries


@pytest.mark.parametrize("seed", range(200))
def test_fifo_algorithms_match_walk_oracle(seed):
    g, queries = _random_instance(seed)
    oracle_opts = OracleOptions(horizon=HORIZON)
    expand_opts = ExpandOptions(horizon=HORIZON)

    for q in queries:
        expected = brute_force_fastest(g, q.source, q.target, q.t0, oracle_opts).arrival
        fifo_arrival = td_dijkstra_fifo(g, q).arrival.get(q.target)
        assert fifo_arrival == expected

        if expected is None:
            with pytest.raises(UnreachableError):
                td_astar(g, q)
            with pytest.raises((UnreachableError, TruncatedError)):
                solve_via_state_graph(g, q, expand_opts)
            continue

        astar_route = td_astar(g, q)
        state_route = solve_via_state_graph(g, q, expand_opts)
        assert astar_route.arrival == expected
        assert state_route.arrival == expected
        assert audit_route(g, astar_route) == []
        assert audit_route(g, state_route) == []


@pytest.mark.parametrize("seed", range(40))
def test_every_prefix_of_an_optimal_route_is_optimal(seed):
    g, queries = _random_instance(seed)
    oracle_opts = OracleOptions(horizon=HORIZON)
    for q in queries:
        times = td_dijkstra_fifo(g, q)
        if q.target not in times.arrival:
            continue
        route = extract_route(times, q.target)
        for node, arrival in route.prefix_arrivals():
            assert brute_force_fastest(g, q.source, node, q.t0, oracle_opts).arrival == arrival


@pytest.mark.parametrize("seed", range(100))
def test_waiting_never_helps_on_fifo_graphs(seed):
    g, queries = _random_instance(seed)
    opts = ExpandOptions(allow_wait=True, horizon=HORIZON)
    for q in queries:
        expected = td_dijkstra_fifo(g, q).arrival.get(q.target)
        if expected is None:
            with pytest.raises((UnreachableError, TruncatedError)):
                solve_via_state_graph(g, q, opts)
            continue
        assert solve_via_state_graph(g, q, opts).arrival == expected


@pytest.mark.parametrize("seed", range(50))
def test_fifo_arrivals_never_decrease_with_departure_time(seed):
    g, queries = _random_instance(seed)
    source = queries[0].source
    previous = td_dijkstra_fifo(g, TdQuery(source, None, 0)).arrival
    for t0 in range(1, 41):
        arrival = td_dijkstra_fifo(g, TdQuery(source, None, t0)).arrival
        assert arrival.keys() == previous.keys()
        assert all(arrival[v] >= previous[v] for v in arrival)
        previous = arrival


NON_FIFO_HORIZON = 200


def _non_fifo_instance(seed: int):
    rng = np.random.default_rng(50_000 + seed)
    nodes = int(rng.integers(2, 8))
    spec = RandomSpec(nodes=nodes, edge_prob=0.4, fifo=False, max_value=20,
                      breakpoints=3, seed=seed, max_edges=15)
    g = gen_random(spec).graph
    queries = [TdQuery(int(rng.integers(0, nodes)), int(rng.integers(0, nodes)), int(rng.integers(0, 41)))
               for _ in range(3)]
    return g, queries


@pytest.mark.parametrize("seed", range(200))
def test_state_graph_matches_walk_oracle_without_fifo(seed):
    g, queries = _non_fifo_instance(seed)
    oracle_opts = OracleOptions(horizon=NON_FIFO_HORIZON)
    expand_opts = ExpandOptions(horizon=NON_FIFO_HORIZON)
    for q in queries:
        expected = brute_force_fastest(g, q.source, q.target, q.t0, oracle_opts).arrival
        if expected is None:
            with pytest.raises((UnreachableError, TruncatedError)):
                solve_via_state_graph(g, q, expand_opts)
            continue
        route = solve_via_state_graph(g, q, expand_opts)
        assert route.arrival == expected
        assert audit_route(g, route) == []


@pytest.mark.parametrize("seed", range(200))
def test_naive_relaxation_never_beats_the_walk_oracle(seed):
    g, queries = _non_fifo_instance(seed)
    oracle_opts = OracleOptions(horizon=NON_FIFO_HORIZON)
    for q in queries:
        expected = brute_force_fastest(g, q.source, q.target, q.t0, oracle_opts).arrival
        naive = naive_td_dijkstra(g, q).arrival.get(q.target)
        if naive is None:
            assert expected is None
        elif expected is None:
            assert naive > NON_FIFO_HORIZON
        else:
            assert naive >= expected


class TestInvalidGraphs:
    @pytest.fixture
    def dangling(self):
        return build_graph(2, [(0, 1, constant(1)), (1, 5, constant(1))])

    @pytest.mark.parametrize("search", [
        lambda g: naive_td_dijkstra(g, TdQuery(0, None, 0)),
        lambda g: td_dijkstra_fifo(g, TdQuery(0, 1, 0)),
        lambda g: td_astar(g, TdQuery(0, 1, 0)),
        lambda g: solve_via_state_graph(g, TdQuery(0, 1, 0)),
        lambda g: expand(g, 0, 0),
        lambda g: brute_force_fastest(g, 0, 1, 0),
    ])
    def test_searches_reject_bad_endpoints(self, dangling, search):
        with pytest.raises(InvalidGraphError) as err:
            search(dangling)
        assert err.value.status == "invalid_graph"
        assert "endpoint 5" in str(err.value)
