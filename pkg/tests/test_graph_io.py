"""Graph file format, loaders and result documents."""

import json

import pytest

from modules.errors import ParseError
from modules.graph_core import evaluate
from modules.graph_io import (
    build_result_document, decode_graph_bytes, fifo_summary, load_graph, load_static_graph,
    parse_graph, parse_static_graph, render_document, serialize_graph
)
from modules.oracle_corpus import RandomSpec, gen_random, builtin_corpus
from modules.routing_td import TdQuery, td_astar
from utils.helpers import list_data_graphs, load_data_graph_text

DOCUMENT_KEYS = ['schema', 'query', 'algorithm', 'status', 'message', 'arrival', 'length',
                 'nodes', 'edge_events', 'labels', 'stats', 'fifo', 'tick_size']


class TestParse:
    def test_shipped_fig1(self):
        g = parse_graph(load_data_graph_text("fig1"))
        assert g.node_count == 4
        assert g.names == ("s", "u", "v", "f")
        assert evaluate(g.edges[3].cost, 1) == 10

    def test_shipped_files_match_corpus(self):
        corpus = {instance.name: instance.graph for instance in builtin_corpus()}
        for name in list_data_graphs():
            g = parse_graph(load_data_graph_text(name))
            if name in corpus:
                assert g == corpus[name]

    def test_single_node_without_edges(self):
        g = parse_graph("graph 1 0\n")
        assert g.node_count == 1 and g.edges == ()

    def test_comments_ids_and_tick(self):
        text = """
        # two nodes, ids only
        graph 2 1   # header
        tick 60
        edge 0 1 pwl 0:4,10:2
        """
        g = parse_graph(text)
        assert g.tick_size == 60
        assert g.names == ("0", "1")
        assert evaluate(g.edges[0].cost, 5) == 3

    def test_unknown_node_reports_line(self):
        with pytest.raises(ParseError) as err:
            parse_graph("graph 4 1\nedge 0 9 const 1\n")
        assert err.value.line == 2
        assert err.value.column == 8

    @pytest.mark.parametrize("text, line", [
        ("edge 0 1 const 1\n", 1),
        ("graph 2 1\nedge 0 1 fast 3\n", 2),
        ("graph 2 1\nedge 0 1 pwc 0:3,x:1\n", 2),
        ("graph 2 2\nedge 0 1 const 1\n", 1),
        ("graph 2 1\nedge 0 1 pwc 1:3\n", 2),
        ("graph 2 1\nedge 0 1 const -2\n", 2),
        ("graph 2 0\nnode a\nnode a\n", 3),
        ("graph 2 0\nroute 0 1\n", 2),
    ])
    def test_errors(self, text, line):
        with pytest.raises(ParseError) as err:
            parse_graph(text)
        assert err.value.line == line

    def test_static_graph_allows_negative_costs(self):
        g = parse_static_graph("graph 2 1\nnode a\nnode b\nedge a b const -2\n")
        assert g.edges[0].weight == -2
        assert g.names == ("a", "b")

    def test_static_graph_freezes_departure(self):
        g = parse_static_graph(load_data_graph_text("fig1"), at=0)
        assert [e.weight for e in g.edges] == [1, 1, 1, 10]


class TestRoundTrip:
    def test_corpus(self):
        for instance in builtin_corpus():
            assert parse_graph(serialize_graph(instance.graph)) == instance.graph

    def test_random_instances(self):
        for seed in range(10):
            g = gen_random(RandomSpec(nodes=5, fifo=seed % 2 == 0, seed=seed)).graph
            assert parse_graph(serialize_graph(g, comment=f"seed {seed}")) == g

    def test_serialized_text(self, fig1):
        text = serialize_graph(fig1)
        assert text.splitlines()[0] == "graph 4 4"
        assert "edge v f pwc 0:10,2:1" in text


class TestLoad:
    def test_corpus_name_carries_query(self):
        g, query = load_graph("fig1")
        assert query == TdQuery(0, 3, 0)
        assert g.names == ("s", "u", "v", "f")

    def test_shipped_file(self):
        g, query = load_graph("profiles")
        assert query is None
        assert all(r.is_fifo for r in g.fifo_reports.values())

    def test_path(self, tmp_path, fig1):
        path = tmp_path / "mine.graph"
        path.write_text(serialize_graph(fig1), encoding="utf-8")
        g, query = load_graph(str(path))
        assert g == fig1 and query is None
        assert load_static_graph(str(path), at=2).edges[3].weight == 1

    def test_missing(self):
        with pytest.raises(FileNotFoundError):
            load_graph("no-such-graph")

    def test_invalid_utf8_is_a_parse_error(self, tmp_path):
        path = tmp_path / "bad.graph"
        path.write_bytes(b"graph 1 0\n# ok\n  \xff\xfe\n")
        with pytest.raises(ParseError) as err:
            load_graph(str(path))
        assert (err.value.line, err.value.column) == (3, 3)
        assert err.value.reason == "invalid UTF-8"
        with pytest.raises(ParseError):
            load_static_graph(str(path))

    def test_decode_accepts_utf8_names(self):
        text = decode_graph_bytes("graph 1 0\nnode café\n".encode("utf-8"))
        assert parse_graph(text).names == ("café",)
        with pytest.raises(ParseError) as err:
            decode_graph_bytes(b"\x80graph 1 0\n")
        assert (err.value.line, err.value.column) == (1, 1)


class TestResultDocument:
    def test_key_order_and_values(self, fig1_fifo):
        q = TdQuery(0, 3, 0)
        route = td_astar(fig1_fifo, q)
        doc = build_result_document(fig1_fifo, q, "td-astar", arrival=route.arrival,
                                    nodes=route.nodes, edge_events=route.edge_events,
                                    stats=route.stats, fifo=fifo_summary(fig1_fifo))
        assert list(doc) == DOCUMENT_KEYS
        assert doc['query'] == {'source': 's', 'target': 'f', 't0': 0}
        assert doc['arrival'] == 11
        assert doc['nodes'] == ['s', 'v', 'f']
        assert doc['edge_events'][1] == {'edge': 3, 'from': 'v', 'to': 'f', 'depart': 1, 'arrive': 11}
        assert doc['fifo'] == {'checked': 4, 'non_fifo_edges': []}

    def test_fifo_summary_witness(self, fig1):
        summary = fifo_summary(fig1)
        assert summary['non_fifo_edges'] == [
            {'edge': 3, 'label': 'v->f', 'witness': {'t1': 1, 't2': 2, 'a1': 11, 'a2': 3}}
        ]

    def test_render_is_stable_json(self, fig1):
        doc = build_result_document(fig1, TdQuery(0, None, 0), "naive-td", labels={3: 11, 0: 0})
        text = render_document(doc)
        assert text == render_document(doc)
        assert text.endswith("\n")
        parsed = json.loads(text)
        assert list(parsed['labels']) == ['s', 'f']
        assert parsed['query']['target'] is None
