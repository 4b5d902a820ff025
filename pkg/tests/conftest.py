"""Shared fixtures: the corpus graphs and a clean configuration environment."""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from modules.graph_core import build_graph, constant  # noqa: E402
from modules.oracle_corpus import fig1_graph, triangle_graph  # noqa: E402
from modules.state_graph import pseudo_poly_family  # noqa: E402
from utils.constants import HORIZON_ENV_VAR, LOG_LEVEL_ENV_VAR  # noqa: E402


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv(HORIZON_ENV_VAR, raising=False)
    monkeypatch.delenv(LOG_LEVEL_ENV_VAR, raising=False)


@pytest.fixture
def repo_root() -> Path:
    return ROOT


@pytest.fixture
def fig1():
    return fig1_graph()


@pytest.fixture
def fig1_fifo():
    return fig1_graph(constant(10))


@pytest.fixture
def fig3_k4():
    return pseudo_poly_family(4)


@pytest.fixture
def triangle():
    return triangle_graph()


@pytest.fixture
def single_node():
    return build_graph(1, [], names=("x",))
