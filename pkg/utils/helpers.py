"""
TEMPO Route - Helper Utilities
==============================
Common functions used across the engine, the CLI and the explorer pages.
"""

import hashlib
import logging
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

from utils.constants import HORIZON_ENV_VAR, LOG_LEVEL_ENV_VAR, DEFAULT_LOG_LEVEL, TICK_SIZE

logger = logging.getLogger(__name__)

# Data directory
DATA_DIR = Path(__file__).parent.parent / "data"
GRAPH_SUFFIX = ".graph"


def _get_setting(name: str) -> str:
    """Get a setting from Streamlit secrets (inside a running app) or the environment."""
    # Only consult secrets when Streamlit is already loaded; the CLI never imports it
    if "streamlit" in sys.modules:
        try:
            import streamlit as st
            value = st.secrets.get(name, "")
            if value:
                return str(value).strip()
        except Exception:
            pass
    return os.environ.get(name, "").strip()


def get_horizon_override() -> Optional[int]:
    """Absolute default horizon from TEMPO_DEFAULT_HORIZON, or None."""
    raw = _get_setting(HORIZON_ENV_VAR)
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {HORIZON_ENV_VAR}={raw!r}: not an integer")
        return None
    if value <= 0:
        logger.warning(f"Ignoring {HORIZON_ENV_VAR}={value}: must be positive")
        return None
    return value


def get_log_level() -> str:
    """Log level name for the CLI."""
    level = _get_setting(LOG_LEVEL_ENV_VAR).upper() or DEFAULT_LOG_LEVEL
    if not isinstance(logging.getLevelName(level), int):
        return DEFAULT_LOG_LEVEL
    return level


def list_data_graphs():
    """Names of the graph files shipped in data/."""
    return sorted(p.stem for p in DATA_DIR.glob(f"*{GRAPH_SUFFIX}"))


def load_data_graph_text(name: str) -> str:
    """Load a shipped graph file by name (without suffix)."""
    with open(DATA_DIR / f"{name}{GRAPH_SUFFIX}", 'r', encoding='utf-8') as f:
        return f.read()


def format_ticks(ticks: Optional[int], tick_size: int = TICK_SIZE) -> str:
    """Format a tick count for display."""
    if ticks is None:
        return "∞"
    if tick_size == 1:
        return f"{ticks}"
    return f"{ticks} ({ticks * tick_size} units)"


def text_checksum(text: str) -> str:
    """Short stable checksum of a text document."""
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


def export_timestamp():
    """Generate timestamp for export filenames."""
    return datetime.now().strftime("%Y%m%d_%H%M%S")
