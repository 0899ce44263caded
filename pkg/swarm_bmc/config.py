"""Defaults shared by the library and the command line."""

import logging
import os

DEFAULT_WIDTH = 8
MIN_WIDTH = 2
MAX_WIDTH = 64
DEFAULT_DEPTH = 12
DEFAULT_STEP_LIMIT = 10**6
ORACLE_SPACE_LIMIT = 10**7

# Luby restart unit, in conflicts
RESTART_BASE = 100

SEED_ENV = "SWARM_BMC_SEED"
LOG_LEVEL_ENV = "SWARM_BMC_LOG_LEVEL"

# exhaustive swarm strategy refuses feature sets larger than this
MAX_EXHAUSTIVE_FEATURES = 12


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw, 0) & ((1 << 64) - 1)
    except ValueError:
        logging.getLogger(__name__).warning("ignoring non-integer %s=%r", SEED_ENV, raw)
        return 0


def default_log_level() -> str:
    return os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
