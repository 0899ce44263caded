"""Single-variant bounded model checking and counterexamples."""

from swarm_bmc.bmc.counterexample import Counterexample, counterexample_from_json, decode_model
from swarm_bmc.bmc.pipeline import (
    BmcOptions, Metrics, PreparedInstance, Status, VerificationOutcome, check, prepare, solve_prepared,
    validate_outcome,
)

__all__ = [
    "BmcOptions", "Counterexample", "Metrics", "PreparedInstance", "Status", "VerificationOutcome", "check",
    "counterexample_from_json", "decode_model", "prepare", "solve_prepared", "validate_outcome",
]
