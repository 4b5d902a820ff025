"""Smoke runs of the Streamlit app and its pages."""

import pytest
from streamlit.testing.v1 import AppTest

PAGES = [
    "app.py",
    "pages/1_Route_Query.py",
    "pages/2_FIFO_Inspector.py",
    "pages/3_State_Graph.py",
    "pages/4_Benchmarks.py",
]


def run_page(repo_root, page: str) -> AppTest:
    at = AppTest.from_file(str(repo_root / page), default_timeout=30)
    return at.run()


@pytest.mark.parametrize("page", PAGES)
def test_page_renders(repo_root, page):
    at = run_page(repo_root, page)
    assert not at.exception


def test_home_lists_the_corpus(repo_root):
    at = run_page(repo_root, "app.py")
    assert at.metric[0].value == "4"


def test_route_page_default_query(repo_root):
    at = run_page(repo_root, "pages/1_Route_Query.py")
    assert at.success[0].value == "s → u → v → f"
    assert at.metric[0].value == "3"


def test_route_page_naive_algorithm(repo_root):
    at = run_page(repo_root, "pages/1_Route_Query.py")
    algo = next(box for box in at.selectbox if box.label == "Algorithm")
    algo.set_value("naive-td").run()
    assert not at.exception
    assert at.success[0].value == "s → v → f"
    assert at.metric[0].value == "11"


def test_fifo_inspector_counts_violations(repo_root):
    at = run_page(repo_root, "pages/2_FIFO_Inspector.py")
    values = {m.label: m.value for m in at.metric}
    assert values["Non-FIFO edges"] == "1"
    assert values["Scan disagreements"] == "0"


def test_state_graph_page_counts(repo_root):
    at = run_page(repo_root, "pages/3_State_Graph.py")
    values = {m.label: m.value for m in at.metric}
    assert values["States"] == "6"
    assert values["Best target time"] == "3"
