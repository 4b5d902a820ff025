"""
TEMPO Route - Route Query
=========================
Run one routing query with any algorithm and inspect the result document.
"""

import streamlit as st
import pandas as pd
import plotly.graph_objects as go
import sys
from pathlib import Path

APP_DIR = Path(__file__).parent.parent
sys.path.insert(0, str(APP_DIR))

from utils.constants import ALGORITHMS, APP_NAME, DEFAULT_MAX_STATES, TARGET_REQUIRED
from utils.helpers import format_ticks
from modules.explorer import graph_selector_sidebar, node_selector
from modules.graph_io import render_document
from modules.query_runner import run_query
from modules.routing_td import TdQuery
from modules.state_graph import ExpandOptions

st.set_page_config(page_title=f"Route Query | {APP_NAME}", page_icon="\U0001f697", layout="wide")


def timeline_chart(g, route) -> go.Figure:
    """One bar per edge event, from departure to arrival."""
    fig = go.Figure()
    for i, ev in enumerate(route.edge_events):
        fig.add_trace(go.Bar(
            x=[ev.arrive - ev.depart],
            y=[g.edge_label(ev.edge)],
            base=[ev.depart],
            orientation='h',
            name=g.edge_label(ev.edge),
            text=[f"{ev.depart} → {ev.arrive}"],
            textposition='inside',
            showlegend=False,
        ))
    fig.update_layout(
        title="Edge timeline",
        xaxis_title="time (ticks)",
        yaxis=dict(autorange="reversed"),
        height=120 + 50 * max(len(route.edge_events), 1),
    )
    return fig


def main():
    st.title("\U0001f697 Route Query")

    selection = graph_selector_sidebar()
    if selection is None:
        st.info("Select or upload a graph in the sidebar.")
        return
    label, g, default_query = selection
    default_query = default_query or TdQuery(0, None, 0)

    col1, col2, col3 = st.columns(3)
    with col1:
        source = node_selector(g, "Source", default_query.source, key="route_source")
    with col2:
        target = node_selector(g, "Target", default_query.target, key="route_target", allow_none=True)
    with col3:
        t0 = st.number_input("Departure t0 (ticks)", min_value=0, value=default_query.t0, step=1)

    col1, col2, col3 = st.columns(3)
    with col1:
        algo = st.selectbox("Algorithm", list(ALGORITHMS), index=list(ALGORITHMS).index("state-graph"),
                            format_func=lambda a: ALGORITHMS[a]["label"])
    with col2:
        allow_wait = st.checkbox("Allow waiting", value=False, disabled=algo != "state-graph")
        horizon = st.number_input("Horizon (0 = default)", min_value=0, value=0, step=10)
    with col3:
        max_states = st.number_input("Max states", min_value=1, value=DEFAULT_MAX_STATES, step=1000)

    if algo in TARGET_REQUIRED and target is None:
        st.warning(f"{ALGORITHMS[algo]['label']} needs a target node.")
        return

    q = TdQuery(int(source), target, int(t0))
    opts = ExpandOptions(allow_wait=allow_wait, horizon=int(horizon) or None, max_states=int(max_states))
    doc, route = run_query(g, q, algo, opts)

    st.divider()

    status = doc['status']
    if status == "ok":
        col1, col2, col3 = st.columns(3)
        with col1:
            if doc['arrival'] is not None:
                st.metric("Arrival", format_ticks(doc['arrival'], doc['tick_size']))
            elif doc['length'] is not None:
                st.metric("Length", format_ticks(doc['length']))
            else:
                st.metric("Labelled nodes", len(doc['labels']))
        with col2:
            st.metric("Settled", doc['stats'].get('settled', 0))
        with col3:
            st.metric("States", doc['stats'].get('states', 0))
        if doc['nodes']:
            st.success(" → ".join(doc['nodes']))
    elif status == "unreachable":
        st.warning(doc['message'])
    else:
        st.error(f"{status}: {doc['message']}")

    if doc['fifo'] and doc['fifo']['non_fifo_edges']:
        rows = [{'edge': v['label'], **v['witness']} for v in doc['fifo']['non_fifo_edges']]
        st.markdown("**Non-FIFO edges**")
        st.dataframe(pd.DataFrame(rows), use_container_width=True, hide_index=True)

    if route is not None and route.edge_events:
        st.plotly_chart(timeline_chart(g, route), use_container_width=True)
        events = pd.DataFrame(doc['edge_events'])
        st.dataframe(events, use_container_width=True, hide_index=True)

    if doc['labels']:
        labels = pd.DataFrame({'node': list(doc['labels']), 'label': list(doc['labels'].values())})
        st.dataframe(labels, use_container_width=True, hide_index=True)

    with st.expander("Result document"):
        st.code(render_document(doc), language="json")
    st.download_button(
        label="\U0001f4e5 Download result (JSON)",
        data=render_document(doc),
        file_name=f"{label}_{algo}.json",
        mime="application/json",
    )


main()
