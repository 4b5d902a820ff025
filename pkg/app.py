"""
TEMPO Route - Time-Dependent Routing Explorer
=============================================
Main application entry point.

Run with: streamlit run app.py
"""

import streamlit as st
import sys
from pathlib import Path

import pandas as pd

# Add app directory to path for imports
APP_DIR = Path(__file__).parent
sys.path.insert(0, str(APP_DIR))

from utils.constants import ALGORITHMS, APP_NAME, APP_VERSION, APP_SUBTITLE, FIFO_STATUS_COLORS
from utils.helpers import get_horizon_override, list_data_graphs
from modules.graph_core import default_horizon
from modules.oracle_corpus import builtin_corpus

# Page configuration
st.set_page_config(
    page_title=f"{APP_NAME}",
    page_icon="\U0001f9ed",
    layout="wide",
    initial_sidebar_state="expanded"
)

# --- Configuration Indicator (sidebar) ---
with st.sidebar:
    st.markdown("---")
    st.caption("**Engine Settings**")
    override = get_horizon_override()
    if override is not None:
        st.markdown(f"⏱️ Default horizon fixed at **{override}** ticks")
    else:
        st.markdown("⏱️ Default horizon: t0 + 10 × Σ max travel time")
    st.markdown("---")

# Custom CSS
st.markdown("""
<style>
    .main-header {
        font-size: 2.5rem;
        font-weight: bold;
        color: #1F4E79;
        margin-bottom: 0;
    }
    .sub-header {
        font-size: 1.2rem;
        color: #666;
        margin-top: 0;
    }
    .stButton > button {
        width: 100%;
    }
</style>
""", unsafe_allow_html=True)


def corpus_overview() -> pd.DataFrame:
    """One row per corpus instance with its FIFO status."""
    rows = []
    for instance in builtin_corpus():
        g = instance.graph
        reports = g.fifo_reports
        non_fifo = [g.edge_label(eid) for eid, r in reports.items() if not r.is_fifo]
        q = instance.query
        rows.append({
            'Instance': instance.name,
            'Nodes': g.node_count,
            'Edges': len(g.edges),
            'FIFO': not non_fifo,
            'Non-FIFO edges': ", ".join(non_fifo) or "-",
            'Query': f"{g.name_of(q.source)} → {g.name_of(q.target)} at t0={q.t0}" if q else "-",
            'Horizon': default_horizon(g, q.t0 if q else 0),
            'Notes': instance.notes,
        })
    return pd.DataFrame(rows)


def main():
    """Main application page - Home/Dashboard."""

    # Header
    st.markdown(f'<p class="main-header">\U0001f9ed {APP_NAME}</p>', unsafe_allow_html=True)
    st.markdown(f'<p class="sub-header">{APP_SUBTITLE} v{APP_VERSION}</p>', unsafe_allow_html=True)

    st.divider()

    overview = corpus_overview()

    # Overview metrics
    col1, col2, col3, col4 = st.columns(4)

    with col1:
        st.metric("\U0001f4da Corpus Instances", len(overview))

    with col2:
        st.metric("✅ FIFO Instances", int(overview['FIFO'].sum()))

    with col3:
        st.metric("\U0001f4c1 Shipped Graph Files", len(list_data_graphs()))

    with col4:
        st.metric("⚙️ Algorithms", len(ALGORITHMS))

    st.divider()

    col_left, col_right = st.columns([2, 1])

    with col_left:
        st.subheader("\U0001f4cd Quick Start Guide")

        st.markdown("""
        **TEMPO Route** answers earliest-arrival queries on graphs whose edge
        travel times depend on the departure time.

        **Route Query** \U0001f697
        - Pick a corpus instance or upload a graph file
        - Run any of the static, time-dependent or state-graph algorithms
        - Inspect the result document and the edge timings

        **FIFO Inspector** \U0001f50e
        - Plot c(t) and the arrival curve t + c(t) for any edge
        - Non-FIFO edges are marked with the witness departures

        **State Graph** \U0001f578️
        - Expand the (node, time) states reachable from a departure
        - Render and download the DOT export

        **Benchmarks** \U0001f4c8
        - State counts over the pseudo-polynomial family
        - Seeded random FIFO suites with an Excel export
        """)

        st.info("\U0001f448 Use the sidebar to navigate between pages")

    with col_right:
        st.subheader("⚙️ Algorithms")

        for name, info in ALGORITHMS.items():
            st.markdown(f"""
            <div style="background-color: {info['color']}20; padding: 10px;
                        border-left: 4px solid {info['color']}; border-radius: 4px; margin: 6px 0;">
                <strong>{info['label']}</strong><br>
                <small><code>--algo {name}</code> · {info['family']}</small>
            </div>
            """, unsafe_allow_html=True)

    st.divider()

    st.subheader("\U0001f4da Instance Corpus")

    def fifo_color(value):
        return f"background-color: {FIFO_STATUS_COLORS[bool(value)]}40"

    st.dataframe(
        overview.style.map(fifo_color, subset=['FIFO']),
        use_container_width=True,
        hide_index=True,
    )

    # Footer
    st.divider()
    st.caption(f"{APP_NAME} v{APP_VERSION} | Integer ticks throughout")


if __name__ == "__main__":
    main()
