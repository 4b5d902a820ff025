"""
TEMPO Route - Explorer Page Helpers
===================================
Graph selection shared by the Streamlit pages.
"""

import logging
from typing import Optional, Tuple

import streamlit as st

from modules.errors import ParseError
from modules.graph_core import Graph
from modules.graph_io import decode_graph_bytes, load_graph, parse_graph
from modules.oracle_corpus import corpus_by_name
from modules.routing_td import TdQuery
from utils.helpers import list_data_graphs

logger = logging.getLogger(__name__)

UPLOAD_CHOICE = "Upload a graph file..."


def graph_choices():
    """Corpus instances first, then shipped files not already in the corpus."""
    corpus = list(corpus_by_name())
    shipped = [name for name in list_data_graphs() if name not in corpus]
    return corpus + shipped + [UPLOAD_CHOICE]


@st.cache_data(show_spinner=False)
def _load_named(name: str) -> Tuple[Graph, Optional[TdQuery]]:
    return load_graph(name)


@st.cache_data(show_spinner=False)
def _parse_uploaded(data: bytes) -> Graph:
    return parse_graph(decode_graph_bytes(data))


def graph_selector_sidebar(key: str = "graph") -> Optional[Tuple[str, Graph, Optional[TdQuery]]]:
    """Sidebar graph picker; returns (label, graph, default query) or None."""
    st.sidebar.header("\U0001f5fa️ Graph")

    if 'active_graph' not in st.session_state:
        st.session_state.active_graph = graph_choices()[0]

    choices = graph_choices()
    index = choices.index(st.session_state.active_graph) if st.session_state.active_graph in choices else 0
    choice = st.sidebar.selectbox("Instance", choices, index=index, key=f"{key}_choice")
    st.session_state.active_graph = choice

    if choice != UPLOAD_CHOICE:
        g, query = _load_named(choice)
        return choice, g, query

    uploaded = st.sidebar.file_uploader("Graph file", type=["graph", "txt"], key=f"{key}_upload")
    if uploaded is None:
        st.sidebar.info("Upload a .graph file to continue")
        return None
    try:
        g = _parse_uploaded(uploaded.getvalue())
    except ParseError as e:
        st.sidebar.error(f"Could not parse {uploaded.name}: {e}")
        logger.info(f"Rejected upload {uploaded.name}: {e}")
        return None
    return uploaded.name, g, None


def node_selector(g: Graph, label: str, default: Optional[int], key: str,
                  allow_none: bool = False) -> Optional[int]:
    """Selectbox over node names; returns a NodeId (or None when allowed)."""
    options = ([None] if allow_none else []) + list(range(g.node_count))
    index = options.index(default) if default in options else 0
    return st.selectbox(
        label, options, index=index, key=key,
        format_func=lambda n: "(none)" if n is None else g.name_of(n),
    )
