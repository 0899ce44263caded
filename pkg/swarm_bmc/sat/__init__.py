"""SAT solving: embedded CDCL solver, z3 backend and truth-table oracle."""

from swarm_bmc.sat.cdcl import (
    UNLIMITED, CdclSolver, Model, Sat, SolveBudget, SolveResult, SolveStats, Unknown, Unsat, check_model, solve,
)
from swarm_bmc.sat.truth_table import brute_force
from swarm_bmc.sat.z3_backend import solve_with, solve_z3

__all__ = [
    "UNLIMITED", "CdclSolver", "Model", "Sat", "SolveBudget", "SolveResult", "SolveStats", "Unknown", "Unsat",
    "brute_force", "check_model", "solve", "solve_with", "solve_z3",
]
