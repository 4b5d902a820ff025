"""
TEMPO Route - Benchmarks
========================
Pseudo-polynomial state counts and seeded random FIFO suites.
"""

import streamlit as st
import pandas as pd
import plotly.express as px
import plotly.graph_objects as go
import sys
from pathlib import Path

APP_DIR = Path(__file__).parent.parent
sys.path.insert(0, str(APP_DIR))

from utils.constants import ALGORITHMS, APP_NAME, BENCH_DEFAULT_SEED, BENCH_INSTANCES_PER_SIZE
from utils.helpers import export_timestamp
from modules.benchmark import (
    export_excel, run_pseudo_poly_suite, run_random_fifo_suite, state_count_fit
)

st.set_page_config(page_title=f"Benchmarks | {APP_NAME}", page_icon="\U0001f4c8", layout="wide")

if 'bench_pseudo_poly' not in st.session_state:
    st.session_state.bench_pseudo_poly = None
if 'bench_random_fifo' not in st.session_state:
    st.session_state.bench_random_fifo = None


def pseudo_poly_section():
    st.header("Pseudo-polynomial family")
    st.markdown("""
    Three nodes s, u, f; s ⇄ u cost 1; s → f costs 2k before time k and 1
    afterwards. The fastest walk bounces between s and u until time k, so the
    number of reachable states grows with the magnitude k.
    """)

    col1, col2, col3 = st.columns(3)
    with col1:
        k_min = st.number_input("k from", min_value=1, value=2, step=1)
    with col2:
        k_max = st.number_input("k to", min_value=1, value=40, step=1)
    with col3:
        k_step = st.number_input("step", min_value=1, value=2, step=1)

    if st.button("▶️ Run sweep", key="run_pseudo_poly"):
        ks = list(range(int(k_min), int(k_max) + 1, int(k_step)))
        with st.spinner(f"Expanding {len(ks)} instances..."):
            st.session_state.bench_pseudo_poly = run_pseudo_poly_suite(ks)

    df = st.session_state.bench_pseudo_poly
    if df is None or df.empty:
        return

    fig = go.Figure()
    fig.add_trace(go.Scatter(x=df['k'], y=df['state_count'], mode="markers", name="closure states",
                             marker=dict(color=ALGORITHMS["state-graph"]["color"], size=9)))
    fig.add_trace(go.Scatter(x=df['k'], y=df['targeted_states'], mode="markers",
                             name="target-bounded states",
                             marker=dict(color=ALGORITHMS["td-fifo"]["color"], size=9)))
    if len(df) >= 2:
        fit = state_count_fit(df)
        fig.add_trace(go.Scatter(x=df['k'], y=fit['slope'] * df['k'] + fit['intercept'],
                                 mode="lines", name=f"fit {fit['slope']:.2f}·k + {fit['intercept']:.2f}"))
        col1, col2 = st.columns(2)
        with col1:
            st.metric("Slope (states per unit k)", f"{fit['slope']:.3f}")
        with col2:
            st.metric("Exactly affine", "yes" if fit['exact_affine'] else "no")
    fig.update_layout(xaxis_title="k", yaxis_title="states", height=450)
    st.plotly_chart(fig, use_container_width=True)
    st.dataframe(df, use_container_width=True, hide_index=True)


def random_fifo_section():
    st.header("Random FIFO graphs")

    col1, col2, col3 = st.columns(3)
    with col1:
        sizes = st.multiselect("Node counts", [3, 4, 5, 6, 7, 8, 10, 12], default=[4, 6, 8])
    with col2:
        seed = st.number_input("Seed", min_value=0, value=BENCH_DEFAULT_SEED, step=1)
    with col3:
        instances = st.number_input("Instances per size", min_value=1, value=BENCH_INSTANCES_PER_SIZE, step=1)

    if st.button("▶️ Run suite", key="run_random_fifo"):
        if not sizes:
            st.warning("Pick at least one node count.")
        else:
            with st.spinner("Running td-fifo, td-astar and the state-graph solver..."):
                st.session_state.bench_random_fifo = run_random_fifo_suite(
                    sorted(sizes), seed=int(seed), instances=int(instances))

    df = st.session_state.bench_random_fifo
    if df is None or df.empty:
        return

    disagreements = int((~df['agree']).sum())
    if disagreements:
        st.error(f"{disagreements} instance(s) where the algorithms disagree")
    else:
        st.success(f"All {len(df)} instances agree")

    timings = df.melt(id_vars=['size'], value_vars=['td_fifo_ms', 'td_astar_ms', 'state_graph_ms'],
                      var_name='algorithm', value_name='ms')
    fig = px.box(timings, x='size', y='ms', color='algorithm', title="Wall time per query")
    st.plotly_chart(fig, use_container_width=True)
    st.dataframe(df, use_container_width=True, hide_index=True)


def main():
    st.title("\U0001f4c8 Benchmarks")

    pseudo_poly_section()
    st.divider()
    random_fifo_section()

    st.divider()
    if st.session_state.bench_pseudo_poly is not None or st.session_state.bench_random_fifo is not None:
        st.download_button(
            label="\U0001f4e5 Export to Excel",
            data=export_excel(st.session_state.bench_pseudo_poly, st.session_state.bench_random_fifo),
            file_name=f"tempo_benchmarks_{export_timestamp()}.xlsx",
            mime="application/vnd.openxmlformats-officedocument.spreadsheetml.sheet",
        )


main()
