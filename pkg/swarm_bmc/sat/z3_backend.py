"""Solve a CnfFormula with z3 instead of the embedded solver."""

import logging
import time
from typing import Optional

from z3 import Bool, BoolRef, BoolVal, Not, Or, Solver, is_true, sat, unsat

from swarm_bmc.encode.cnf import CnfFormula
from swarm_bmc.sat.cdcl import (
    UNLIMITED, CancelFlag, Model, Sat, SolveBudget, SolveResult, SolveStats, Unknown, Unsat, solve,
)

logger = logging.getLogger(__name__)


def to_z3(cnf: CnfFormula) -> tuple[list[BoolRef], list[BoolRef]]:
    atoms = [Bool(f"x{v}") for v in range(cnf.num_vars + 1)]
    clauses = []
    for clause in cnf.clauses:
        lits = [atoms[lit] if lit > 0 else Not(atoms[-lit]) for lit in clause]
        clauses.append(Or(lits) if lits else BoolVal(False))
    return atoms, clauses


def solve_z3(cnf: CnfFormula, budget: SolveBudget = UNLIMITED, seed: int = 0) -> SolveResult:
    start = time.perf_counter()
    atoms, clauses = to_z3(cnf)
    solver = Solver()
    solver.set("random_seed", seed & 0xFFFFFFFF)
    if budget.max_seconds is not None:
        solver.set("timeout", max(1, int(budget.max_seconds * 1000)))
    solver.add(clauses)
    verdict = solver.check()
    stats = SolveStats(solve_ms=(time.perf_counter() - start) * 1000)
    logger.debug("z3 answered %s on %d vars / %d clauses", verdict, cnf.num_vars, cnf.num_clauses)
    if verdict == sat:
        m = solver.model()
        values = tuple(is_true(m.eval(atoms[v], model_completion=True)) for v in range(1, cnf.num_vars + 1))
        return Sat(Model(values), stats)
    if verdict == unsat:
        return Unsat(stats)
    return Unknown("time" if budget.max_seconds is not None else solver.reason_unknown(), stats)


def solve_with(backend: str, cnf: CnfFormula, budget: SolveBudget = UNLIMITED, seed: int = 0,
               cancel: Optional[CancelFlag] = None) -> SolveResult:
    """Dispatch on the backend name, "cdcl" or "z3"."""
    match backend:
        case "cdcl":
            return solve(cnf, budget, seed, cancel)
        case "z3":
            return solve_z3(cnf, budget, seed)
    raise ValueError(f"unknown solver backend {backend!r}")
