"""Exhaustive truth-table oracle for small CNF formulas.

All 2^n assignments are evaluated at once: row r of the table assigns
variable v the value of bit (v - 1) of r, and each variable's column is a
Python int with one bit per row. A clause is the OR of its literal columns and
the formula the AND of its clauses, so the set bits of the result are exactly
the satisfying rows.
"""

from swarm_bmc.encode.cnf import CnfFormula
from swarm_bmc.sat.cdcl import Model, Sat, SolveResult, Unsat

MAX_VARS = 22


def columns(num_vars: int) -> tuple[int, list[int]]:
    rows = 1 << num_vars
    full = (1 << rows) - 1
    cols = [0]
    for i in range(num_vars):
        half = 1 << i
        block = ((1 << half) - 1) << half
        # block repeated every 2 * half rows
        repeat = full // ((1 << (2 * half)) - 1)
        cols.append(block * repeat)
    return full, cols


def satisfying_rows(cnf: CnfFormula) -> int:
    if cnf.num_vars > MAX_VARS:
        raise ValueError(f"truth table limited to {MAX_VARS} variables, formula has {cnf.num_vars}")
    full, cols = columns(cnf.num_vars)
    result = full
    for clause in cnf.clauses:
        covered = 0
        for lit in clause:
            col = cols[abs(lit)]
            covered |= col if lit > 0 else full ^ col
        result &= covered
        if not result:
            break
    return result


def count_models(cnf: CnfFormula) -> int:
    return satisfying_rows(cnf).bit_count()


def brute_force(cnf: CnfFormula) -> SolveResult:
    """Decide the formula by enumeration; a Sat carries the lowest satisfying row."""
    rows = satisfying_rows(cnf)
    if not rows:
        return Unsat()
    first = (rows & -rows).bit_length() - 1
    return Sat(Model(tuple(bool((first >> i) & 1) for i in range(cnf.num_vars))))
