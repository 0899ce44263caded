"""Conflict-driven clause learning SAT solver.

Two watched literals, first-UIP learning with local minimisation, VSIDS
decisions with phase saving, Luby restarts and LBD-based deletion of learnt
clauses. Internally a literal is coded as `2 * var + sign` (sign 1 for a
negated variable), so its complement is `code ^ 1`.
"""

import heapq
import logging
import random
import time
from dataclasses import dataclass, field
from typing import Optional, Protocol

from swarm_bmc.config import RESTART_BASE
from swarm_bmc.encode.cnf import CnfFormula

logger = logging.getLogger(__name__)

VAR_DECAY = 0.95
RESCALE_LIMIT = 1e100
FIRST_REDUCE = 2000
REDUCE_INCREMENT = 300


class CancelFlag(Protocol):
    def is_set(self) -> bool: ...


@dataclass(frozen=True)
class SolveBudget:
    max_conflicts: Optional[int] = None
    max_seconds: Optional[float] = None

    @property
    def is_unlimited(self) -> bool:
        return self.max_conflicts is None and self.max_seconds is None


UNLIMITED = SolveBudget()


@dataclass(frozen=True)
class Model:
    """Total assignment; values[v - 1] is the value of variable v"""
    values: tuple[bool, ...]

    def __getitem__(self, var: int) -> bool:
        return self.values[var - 1]

    def __len__(self) -> int:
        return len(self.values)

    def lit(self, lit: int) -> bool:
        value = self.values[abs(lit) - 1]
        return value if lit > 0 else not value

    def flip(self, var: int) -> "Model":
        values = list(self.values)
        values[var - 1] = not values[var - 1]
        return Model(tuple(values))

    def dimacs(self) -> str:
        return " ".join(str(v if value else -v) for v, value in enumerate(self.values, start=1))


@dataclass
class SolveStats:
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    learnt: int = 0
    deleted: int = 0
    solve_ms: float = 0.0


@dataclass(frozen=True)
class Sat:
    model: Model
    stats: SolveStats = field(default_factory=SolveStats, compare=False)


@dataclass(frozen=True)
class Unsat:
    stats: SolveStats = field(default_factory=SolveStats, compare=False)


@dataclass(frozen=True)
class Unknown:
    reason: str
    stats: SolveStats = field(default_factory=SolveStats, compare=False)


type SolveResult = Sat | Unsat | Unknown


def luby(i: int) -> int:
    """i-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i %= size
    return 1 << seq


class BudgetExhausted(Exception):
    def __init__(self, reason: str):
        self.reason = reason


class CdclSolver:
    def __init__(self, cnf: CnfFormula, seed: int = 0, restart_base: int = RESTART_BASE,
                 reduce_db: bool = True):
        n = cnf.num_vars
        self.num_vars = n
        self.rng = random.Random(seed)
        self.restart_base = restart_base
        self.reduce_enabled = reduce_db
        self.vals = [0] * (2 * n + 2)
        self.level = [0] * (n + 1)
        self.reason = [-1] * (n + 1)
        self.seen = [False] * (n + 1)
        self.polarity = [False] * (n + 1)
        self.activity = [self.rng.random() * 1e-5 for _ in range(n + 1)]
        self.var_inc = 1.0
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.watches: list[list[int]] = [[] for _ in range(2 * n + 2)]
        self.clauses: list[Optional[list[int]]] = []
        self.learnts: list[int] = []
        self.lbd: dict[int, int] = {}
        self.heap: list[tuple[float, int]] = []
        self.stats = SolveStats()
        self.next_reduce = FIRST_REDUCE
        self.reduce_count = 0
        self.ok = True
        for clause in cnf.clauses:
            self.add_input(clause)
        self.rebuild_heap()

    # clause database

    def add_input(self, clause: list[int]):
        if not self.ok:
            return
        codes: list[int] = []
        present = set()
        for lit in clause:
            code = 2 * lit if lit > 0 else -2 * lit + 1
            if code ^ 1 in present:
                return
            if code not in present:
                present.add(code)
                codes.append(code)
        if not codes:
            self.ok = False
        elif len(codes) == 1:
            value = self.vals[codes[0]]
            if value == -1:
                self.ok = False
            elif value == 0:
                self.enqueue(codes[0], -1)
        else:
            self.attach(codes)

    def attach(self, codes: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(codes)
        self.watches[codes[0]].append(ci)
        self.watches[codes[1]].append(ci)
        return ci

    # assignment

    def decision_level(self) -> int:
        return len(self.trail_lim)

    def enqueue(self, code: int, reason: int):
        self.vals[code] = 1
        self.vals[code ^ 1] = -1
        v = code >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(code)

    def cancel_until(self, level: int):
        if len(self.trail_lim) <= level:
            return
        vals, reason, polarity, activity, heap = self.vals, self.reason, self.polarity, self.activity, self.heap
        start = self.trail_lim[level]
        for code in reversed(self.trail[start:]):
            v = code >> 1
            vals[code] = 0
            vals[code ^ 1] = 0
            reason[v] = -1
            polarity[v] = (code & 1) == 0
            heapq.heappush(heap, (-activity[v], v))
        del self.trail[start:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def propagate(self) -> int:
        """Unit propagation; returns the index of a conflicting clause or -1"""
        vals, clauses, watches, trail = self.vals, self.clauses, self.watches, self.trail
        while self.qhead < len(trail):
            false_lit = trail[self.qhead] ^ 1
            self.qhead += 1
            self.stats.propagations += 1
            ws = watches[false_lit]
            i = j = 0
            end = len(ws)
            while i < end:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c is None:
                    continue
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if vals[first] == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    if vals[c[k]] != -1:
                        c[1] = c[k]
                        c[k] = false_lit
                        watches[c[1]].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if vals[first] == -1:
                        while i < end:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return ci
                    self.enqueue(first, ci)
            del ws[j:]
        return -1

    # heuristics

    def bump(self, v: int):
        self.activity[v] += self.var_inc
        if self.activity[v] > RESCALE_LIMIT:
            self.activity = [a * 1e-100 for a in self.activity]
            self.var_inc *= 1e-100
            self.rebuild_heap()

    def rebuild_heap(self):
        self.heap = [(-self.activity[v], v) for v in range(1, self.num_vars + 1) if self.vals[2 * v] == 0]
        heapq.heapify(self.heap)

    def pick_branch(self) -> int:
        heap, vals = self.heap, self.vals
        while heap:
            _, v = heapq.heappop(heap)
            if vals[2 * v] == 0:
                return 2 * v if self.polarity[v] else 2 * v + 1
        return -1

    # conflict analysis

    def analyze(self, confl: int) -> tuple[list[int], int, int]:
        seen, level, reason, clauses, trail = self.seen, self.level, self.reason, self.clauses, self.trail
        current = len(self.trail_lim)
        learnt = [-1]
        path = 0
        p = -1
        index = len(trail) - 1
        clause = clauses[confl]
        while True:
            for q in (clause if p == -1 else clause[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self.bump(v)
                    seen[v] = True
                    if level[v] >= current:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[index] >> 1]:
                index -= 1
            p = trail[index]
            index -= 1
            seen[p >> 1] = False
            path -= 1
            if path == 0:
                break
            clause = clauses[reason[p >> 1]]
        learnt[0] = p ^ 1

        # drop literals implied by the rest of the clause
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r == -1 or any(not seen[x >> 1] and level[x >> 1] > 0 for x in clauses[r][1:]):
                kept.append(q)
        for q in learnt[1:]:
            seen[q >> 1] = False

        if len(kept) == 1:
            back = 0
        else:
            best = max(range(1, len(kept)), key=lambda k: level[kept[k] >> 1])
            kept[1], kept[best] = kept[best], kept[1]
            back = level[kept[1] >> 1]
        lbd = len({level[q >> 1] for q in kept})
        return kept, back, lbd

    def reduce_db(self):
        vals, reason, clauses = self.vals, self.reason, self.clauses

        def locked(ci: int) -> bool:
            c = clauses[ci]
            return vals[c[0]] == 1 and reason[c[0] >> 1] == ci

        candidates = sorted((ci for ci in self.learnts if self.lbd[ci] > 2 and not locked(ci)),
                            key=lambda ci: (-self.lbd[ci], -ci))
        removed = set(candidates[:len(candidates) // 2])
        for ci in removed:
            clauses[ci] = None
            del self.lbd[ci]
        self.learnts = [ci for ci in self.learnts if ci not in removed]
        self.stats.deleted += len(removed)
        self.reduce_count += 1
        self.next_reduce = self.stats.conflicts + FIRST_REDUCE + REDUCE_INCREMENT * self.reduce_count
        logger.debug("reduced learnt clauses: removed %d, kept %d", len(removed), len(self.learnts))

    # search

    def search(self, conflict_limit: int, budget: SolveBudget, deadline: Optional[float]) -> Optional[bool]:
        local = 0
        stats = self.stats
        while True:
            confl = self.propagate()
            if confl != -1:
                stats.conflicts += 1
                local += 1
                if not self.trail_lim:
                    return False
                learnt, back, lbd = self.analyze(confl)
                self.cancel_until(back)
                if len(learnt) == 1:
                    self.enqueue(learnt[0], -1)
                else:
                    ci = self.attach(learnt)
                    self.learnts.append(ci)
                    self.lbd[ci] = lbd
                    stats.learnt += 1
                    self.enqueue(learnt[0], ci)
                self.var_inc /= VAR_DECAY
                if budget.max_conflicts is not None and stats.conflicts >= budget.max_conflicts:
                    raise BudgetExhausted("conflicts")
                if deadline is not None and stats.conflicts % 256 == 0 and time.perf_counter() > deadline:
                    raise BudgetExhausted("time")
            else:
                if local >= conflict_limit:
                    self.cancel_until(0)
                    return None
                if self.reduce_enabled and stats.conflicts >= self.next_reduce:
                    self.reduce_db()
                code = self.pick_branch()
                if code == -1:
                    return True
                stats.decisions += 1
                self.trail_lim.append(len(self.trail))
                self.enqueue(code, -1)

    def model(self) -> Model:
        return Model(tuple(self.vals[2 * v] == 1 for v in range(1, self.num_vars + 1)))

    def solve(self, budget: SolveBudget = UNLIMITED, cancel: Optional[CancelFlag] = None) -> SolveResult:
        start = time.perf_counter()
        deadline = None if budget.max_seconds is None else start + budget.max_seconds
        result: SolveResult
        try:
            if not self.ok or self.propagate() != -1:
                result = Unsat(self.stats)
            else:
                restarts = 0
                while True:
                    if cancel is not None and cancel.is_set():
                        raise BudgetExhausted("cancelled")
                    if deadline is not None and time.perf_counter() > deadline:
                        raise BudgetExhausted("time")
                    status = self.search(luby(restarts) * self.restart_base, budget, deadline)
                    if status is True:
                        result = Sat(self.model(), self.stats)
                        break
                    if status is False:
                        result = Unsat(self.stats)
                        break
                    restarts += 1
                    self.stats.restarts = restarts
                    self.rebuild_heap()
                    logger.debug("restart %d after %d conflicts", restarts, self.stats.conflicts)
        except BudgetExhausted as exhausted:
            result = Unknown(exhausted.reason, self.stats)
        self.stats.solve_ms = (time.perf_counter() - start) * 1000
        return result


def solve(f: CnfFormula, budget: SolveBudget = UNLIMITED, seed: int = 0,
          cancel: Optional[CancelFlag] = None) -> SolveResult:
    """Decide satisfiability of a CNF formula within the budget."""
    return CdclSolver(f, seed).solve(budget, cancel)


def check_model(f: CnfFormula, m: Model) -> bool:
    if len(m) < f.num_vars:
        return False
    return all(any(m.lit(lit) for lit in clause) for clause in f.clauses)
