"""
TEMPO Route - FIFO Inspector
============================
Travel-time profiles per edge and the FIFO verdict with its witness.
"""

import streamlit as st
import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots
import sys
from pathlib import Path

APP_DIR = Path(__file__).parent.parent
sys.path.insert(0, str(APP_DIR))

from utils.constants import APP_NAME, FIFO_STATUS_COLORS
from modules.explorer import graph_selector_sidebar
from modules.graph_core import evaluate, exact_value
from modules.oracle_corpus import scan_fifo

st.set_page_config(page_title=f"FIFO Inspector | {APP_NAME}", page_icon="\U0001f50e", layout="wide")


def edge_table(g) -> pd.DataFrame:
    rows = []
    for eid, edge in enumerate(g.edges):
        report = g.fifo_reports[eid]
        w = report.witness
        rows.append({
            'id': eid,
            'edge': g.edge_label(eid),
            'kind': edge.cost.kind,
            'points': ", ".join(f"{t}:{v}" for t, v in edge.cost.points),
            'FIFO': report.is_fifo,
            'witness': f"t={w.t1},{w.t2} → {w.a1},{w.a2}" if w else "",
            'scan agrees': scan_fifo(edge.cost).is_fifo == report.is_fifo,
        })
    return pd.DataFrame(rows)


def profile_chart(g, eid: int, end: int) -> go.Figure:
    """c(t) on top, arrival t + c(t) below, witness departures marked."""
    f = g.edges[eid].cost
    ticks = list(range(0, end + 1))
    travel = [evaluate(f, t) for t in ticks]
    exact = [float(exact_value(f, t)) for t in ticks]
    arrival = [t + c for t, c in zip(ticks, travel)]

    fig = make_subplots(rows=2, cols=1, shared_xaxes=True,
                        subplot_titles=("Travel time c(t)", "Arrival t + c(t)"))
    fig.add_trace(go.Scatter(x=ticks, y=travel, mode="lines+markers", name="c(t) (ticks)",
                             line=dict(shape="hv" if f.kind == "PiecewiseConstant" else "linear")),
                  row=1, col=1)
    if f.kind == "PiecewiseLinear":
        fig.add_trace(go.Scatter(x=ticks, y=exact, mode="lines", name="c(t) exact",
                                 line=dict(dash="dot")), row=1, col=1)
    fig.add_trace(go.Scatter(x=ticks, y=arrival, mode="lines+markers", name="arrival"), row=2, col=1)

    report = g.fifo_reports[eid]
    if not report.is_fifo:
        w = report.witness
        fig.add_trace(go.Scatter(
            x=[w.t1, w.t2], y=[w.a1, w.a2], mode="markers", name="FIFO witness",
            marker=dict(size=14, color=FIFO_STATUS_COLORS[False], symbol="x"),
        ), row=2, col=1)

    fig.update_xaxes(title_text="departure time (ticks)", row=2, col=1)
    fig.update_layout(height=600, legend=dict(orientation="h"))
    return fig


def main():
    st.title("\U0001f50e FIFO Inspector")
    st.markdown("""
    An edge is **FIFO** when departing later never means arriving earlier:
    t + c(t) strictly increases from one tick to the next.
    """)

    selection = graph_selector_sidebar()
    if selection is None:
        st.info("Select or upload a graph in the sidebar.")
        return
    label, g, _ = selection

    if not g.edges:
        st.info(f"{label} has no edges.")
        return

    table = edge_table(g)
    col1, col2, col3 = st.columns(3)
    with col1:
        st.metric("Edges", len(table))
    with col2:
        st.metric("Non-FIFO edges", int((~table['FIFO']).sum()))
    with col3:
        st.metric("Scan disagreements", int((~table['scan agrees']).sum()))

    def fifo_color(value):
        return f"background-color: {FIFO_STATUS_COLORS[bool(value)]}40"

    st.dataframe(table.style.map(fifo_color, subset=['FIFO']), use_container_width=True, hide_index=True)

    st.divider()

    eid = st.selectbox("Edge", list(range(len(g.edges))),
                       format_func=lambda e: f"{e}: {g.edge_label(e)}")
    f = g.edges[eid].cost
    default_end = max(f.last_breakpoint + 5, 10)
    end = st.slider("Departures up to", min_value=1, max_value=max(default_end * 4, 40), value=default_end)
    st.plotly_chart(profile_chart(g, eid, end), use_container_width=True)


main()
