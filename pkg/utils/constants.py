"""
TEMPO Route - Configuration Constants
=====================================
Edit this file to change engine settings without modifying code.
"""

# Application Settings
APP_NAME = "TEMPO Route"
APP_VERSION = "1.0.0"
APP_SUBTITLE = "Time-Dependent Routing Engine"

# Time model: every TimePoint / DurationTicks is an integer count of ticks
TICK_SIZE = 1                 # abstract time units per tick
MAX_TICKS = 2 ** 63 - 1       # largest representable TimePoint

# State-graph expansion defaults
HORIZON_FACTOR = 10           # horizon = t0 + factor * sum of per-edge max values
DEFAULT_MAX_STATES = 1_000_000

# Brute-force oracle guard
ORACLE_MAX_NODES = 12

# Environment overrides
HORIZON_ENV_VAR = "TEMPO_DEFAULT_HORIZON"
LOG_LEVEL_ENV_VAR = "TEMPO_LOG_LEVEL"
DEFAULT_LOG_LEVEL = "WARNING"

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNREACHABLE = 2
EXIT_NON_FIFO = 3
EXIT_TRUNCATED = 4

# Result document
RESULT_SCHEMA = "tempo-route/result@1"

# Algorithm catalogue
ALGORITHMS = {
    "dijkstra": {"label": "Dijkstra (static)", "family": "static", "color": "#1F4E79"},
    "bellman-ford": {"label": "Bellman-Ford (static)", "family": "static", "color": "#5B9BD5"},
    "astar": {"label": "A* (static)", "family": "static", "color": "#70AD47"},
    "bidir": {"label": "Bidirectional Dijkstra (static)", "family": "static", "color": "#A9D18E"},
    "naive-td": {"label": "Naive time-dependent Dijkstra", "family": "td", "color": "#FF6B6B"},
    "td-fifo": {"label": "FIFO time-dependent Dijkstra", "family": "td", "color": "#FFC000"},
    "td-astar": {"label": "FIFO time-dependent A*", "family": "td", "color": "#7030A0"},
    "state-graph": {"label": "State-transition graph", "family": "state", "color": "#ED7D31"},
}

# Algorithms that cannot run without a target node
TARGET_REQUIRED = ("astar", "bidir", "td-astar", "state-graph")

# Travel-time function variants (file keywords)
COST_KINDS = {
    "const": "Constant",
    "pwc": "PiecewiseConstant",
    "pwl": "PiecewiseLinear",
}

# Benchmark defaults
BENCH_SUITES = ("random-fifo", "pseudo-poly")
BENCH_DEFAULT_SIZES = {
    "random-fifo": [4, 6, 8],
    "pseudo-poly": [10, 20, 40],
}
BENCH_INSTANCES_PER_SIZE = 5
BENCH_DEFAULT_SEED = 7
BENCH_RANDOM_SPEC = {
    "edge_prob": 0.35,
    "max_value": 30,
    "breakpoints": 3,
    "max_edges": 20,
}

# Export Settings
EXCEL_SHEETS = ["Pseudo-Polynomial", "Random FIFO"]

# Colors for charts
FIFO_STATUS_COLORS = {
    True: "#69DB7C",
    False: "#FF6B6B",
}
