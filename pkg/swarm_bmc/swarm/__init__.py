"""Swarm verification: configuration sampling, parallel runs and aggregation."""

from swarm_bmc.swarm.configs import BASELINE, Strategy, SwarmConfig, SwarmOptions, sample_configs
from swarm_bmc.swarm.orchestrator import run_swarm
from swarm_bmc.swarm.report import (
    ConfigResult, Falsified, Inconclusive, PartiallyVerified, SwarmReport, Verdict, VerifiedToDepth, aggregate,
)

__all__ = [
    "BASELINE", "ConfigResult", "Falsified", "Inconclusive", "PartiallyVerified", "Strategy", "SwarmConfig",
    "SwarmOptions", "SwarmReport", "Verdict", "VerifiedToDepth", "aggregate", "run_swarm", "sample_configs",
]
