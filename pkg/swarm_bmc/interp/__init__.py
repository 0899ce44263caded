"""Concrete semantics: interpreter, replay, exhaustive oracle and SSA evaluation."""

from swarm_bmc.interp.interpreter import ExecutionOutcome, NondetTape, OutcomeKind, TraceStep, execute
from swarm_bmc.interp.oracle import Fails, OracleVerdict, SafeWithinBound, enumerate_bounded
from swarm_bmc.interp.replay import replay
from swarm_bmc.interp.ssa_eval import run_ssa

__all__ = [
    "ExecutionOutcome", "Fails", "NondetTape", "OracleVerdict", "OutcomeKind", "SafeWithinBound", "TraceStep",
    "enumerate_bounded", "execute", "replay", "run_ssa",
]
