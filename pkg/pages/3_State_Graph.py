"""
TEMPO Route - State Graph
=========================
Expand the (node, time) states reachable from a departure.
"""

import streamlit as st
import pandas as pd
import sys
from pathlib import Path

APP_DIR = Path(__file__).parent.parent
sys.path.insert(0, str(APP_DIR))

from utils.constants import APP_NAME, DEFAULT_MAX_STATES
from utils.helpers import export_timestamp
from modules.explorer import graph_selector_sidebar, node_selector
from modules.routing_td import TdQuery
from modules.state_graph import ExpandOptions, audit_state_graph, expand, to_digraph

st.set_page_config(page_title=f"State Graph | {APP_NAME}", page_icon="\U0001f578️", layout="wide")

# Rendering very large graphs in the browser is slow
MAX_RENDERED_STATES = 300


def main():
    st.title("\U0001f578️ State-Transition Graph")

    selection = graph_selector_sidebar()
    if selection is None:
        st.info("Select or upload a graph in the sidebar.")
        return
    label, g, default_query = selection
    default_query = default_query or TdQuery(0, None, 0)

    col1, col2, col3 = st.columns(3)
    with col1:
        source = node_selector(g, "Source", default_query.source, key="state_source")
    with col2:
        target = node_selector(g, "Stop at target", default_query.target, key="state_target",
                               allow_none=True)
    with col3:
        t0 = st.number_input("Departure t0 (ticks)", min_value=0, value=default_query.t0, step=1)

    col1, col2, col3 = st.columns(3)
    with col1:
        allow_wait = st.checkbox("Allow waiting", value=False)
    with col2:
        horizon = st.number_input("Horizon (0 = default)", min_value=0, value=0, step=10)
    with col3:
        max_states = st.number_input("Max states", min_value=1, value=min(DEFAULT_MAX_STATES, 20000), step=100)

    opts = ExpandOptions(allow_wait=allow_wait, horizon=int(horizon) or None,
                         max_states=int(max_states), target=target)
    try:
        sg = expand(g, int(source), int(t0), opts)
    except Exception as e:
        st.error(f"Expansion failed: {e}")
        return

    stats = sg.stats
    col1, col2, col3, col4 = st.columns(4)
    with col1:
        st.metric("States", stats.state_count)
    with col2:
        st.metric("Transitions", stats.transition_count)
    with col3:
        st.metric("Horizon", stats.horizon)
    with col4:
        st.metric("Best target time", stats.best_target_time if stats.best_target_time is not None else "-")

    if stats.truncated:
        st.warning("Expansion was truncated by the horizon or the state cap.")

    problems = audit_state_graph(g, sg)
    if problems:
        st.error(f"{len(problems)} audit problem(s): {problems[0]}")

    digraph = to_digraph(sg)
    if stats.state_count <= MAX_RENDERED_STATES:
        st.graphviz_chart(digraph, use_container_width=True)
    else:
        st.info(f"{stats.state_count} states: too many to draw, download the DOT file instead.")

    col_left, col_right = st.columns(2)
    with col_left:
        st.markdown("**States** (sorted by time, node)")
        states = pd.DataFrame([{'node': g.name_of(s.node), 'time': s.time} for s in sg.states])
        st.dataframe(states, use_container_width=True, hide_index=True)
    with col_right:
        st.markdown("**Transitions**")
        moves = pd.DataFrame([{
            'from': sg.label(t.source),
            'to': sg.label(t.target),
            'via': g.edge_label(t.via) if t.via is not None else "wait",
            'cost': t.cost,
        } for t in sg.transitions])
        st.dataframe(moves, use_container_width=True, hide_index=True)

    st.download_button(
        label="\U0001f4e5 Download DOT",
        data=digraph.source,
        file_name=f"{label}_states_{export_timestamp()}.dot",
        mime="text/vnd.graphviz",
    )


main()
