"""
TEMPO Route - Benchmark Suites
==============================
Deterministic suites behind `cli.py bench` and the Benchmarks page:

- pseudo-poly: state-graph size over pseudo_poly_family(k)
- random-fifo: seeded random FIFO graphs; td-fifo, td-astar and the
  state-graph solver on the same query, with instance checksums
"""

import logging
import time
from io import BytesIO
from typing import Dict, Iterable, Optional

import pandas as pd

from modules.errors import TruncatedError, UnreachableError
from modules.graph_io import serialize_graph
from modules.oracle_corpus import RandomSpec, gen_random
from modules.routing_td import TdQuery, td_astar, td_dijkstra_fifo
from modules.state_graph import (
    expand, fit_state_counts, pseudo_poly_family, solve_via_state_graph
)
from utils.constants import (
    BENCH_DEFAULT_SEED, BENCH_INSTANCES_PER_SIZE, BENCH_RANDOM_SPEC, EXCEL_SHEETS
)
from utils.helpers import text_checksum

logger = logging.getLogger(__name__)

PSEUDO_POLY_COLUMNS = ['k', 'state_count', 'transition_count', 'targeted_states',
                       'arrival', 'wall_ms']
RANDOM_FIFO_COLUMNS = ['size', 'instance', 'seed', 'checksum', 'edges', 'arrival',
                       'td_fifo_settled', 'td_astar_settled', 'state_count',
                       'agree', 'td_fifo_ms', 'td_astar_ms', 'state_graph_ms']


def _elapsed_ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000, 3)


def run_pseudo_poly_suite(ks: Iterable[int]) -> pd.DataFrame:
    """Closure size and the targeted solve for each k; arrival is k+1 for even k."""
    rows = []
    for k in ks:
        g = pseudo_poly_family(k)
        start = time.perf_counter()
        closure = expand(g, 0, 0)
        route = solve_via_state_graph(g, TdQuery(0, 2, 0))
        rows.append({
            'k': k,
            'state_count': closure.stats.state_count,
            'transition_count': closure.stats.transition_count,
            'targeted_states': route.stats['states'],
            'arrival': route.arrival,
            'wall_ms': _elapsed_ms(start),
        })
        logger.info(f"pseudo-poly k={k}: {closure.stats.state_count} states")
    return pd.DataFrame(rows, columns=PSEUDO_POLY_COLUMNS)


def _timed(fn):
    start = time.perf_counter()
    try:
        result = fn()
    except (UnreachableError, TruncatedError):
        result = None
    return result, _elapsed_ms(start)


def run_random_fifo_suite(sizes: Iterable[int], seed: int = BENCH_DEFAULT_SEED,
                          instances: int = BENCH_INSTANCES_PER_SIZE) -> pd.DataFrame:
    """
    `instances` random FIFO graphs per size, query node 0 -> last node at t0=0.
    Instance seeds derive from (seed, size, index) only.
    """
    rows = []
    for size in sizes:
        for i in range(instances):
            instance_seed = seed * 1_000_003 + size * 1_009 + i
            spec = RandomSpec(nodes=size, fifo=True, seed=instance_seed, **BENCH_RANDOM_SPEC)
            g = gen_random(spec).graph
            q = TdQuery(0, size - 1, 0)

            fifo_times, fifo_ms = _timed(lambda: td_dijkstra_fifo(g, q))
            astar_route, astar_ms = _timed(lambda: td_astar(g, q))
            state_route, state_ms = _timed(lambda: solve_via_state_graph(g, q))

            fifo_arrival = fifo_times.arrival.get(q.target)
            astar_arrival = astar_route.arrival if astar_route else None
            state_arrival = state_route.arrival if state_route else None

            rows.append({
                'size': size,
                'instance': i,
                'seed': instance_seed,
                'checksum': text_checksum(serialize_graph(g)),
                'edges': len(g.edges),
                'arrival': fifo_arrival,
                'td_fifo_settled': fifo_times.stats['settled'],
                'td_astar_settled': astar_route.stats['settled'] if astar_route else 0,
                'state_count': state_route.stats['states'] if state_route else 0,
                'agree': fifo_arrival == astar_arrival == state_arrival,
                'td_fifo_ms': fifo_ms,
                'td_astar_ms': astar_ms,
                'state_graph_ms': state_ms,
            })
    df = pd.DataFrame(rows, columns=RANDOM_FIFO_COLUMNS)
    disagreements = int((~df['agree']).sum()) if not df.empty else 0
    if disagreements:
        logger.warning(f"random-fifo: {disagreements} instance(s) with disagreeing arrivals")
    return df


def state_count_fit(df: pd.DataFrame) -> Dict[str, float]:
    return fit_state_counts(df[['k', 'state_count']])


def export_excel(pseudo_poly: Optional[pd.DataFrame] = None,
                 random_fifo: Optional[pd.DataFrame] = None) -> bytes:
    """Workbook with one sheet per suite that was run."""
    output = BytesIO()
    frames = zip(EXCEL_SHEETS, (pseudo_poly, random_fifo))
    with pd.ExcelWriter(output, engine='openpyxl') as writer:
        written = 0
        for sheet, df in frames:
            if df is not None:
                df.to_excel(writer, sheet_name=sheet, index=False)
                written += 1
        if not written:
            pd.DataFrame().to_excel(writer, sheet_name=EXCEL_SHEETS[0], index=False)
    return output.getvalue()
