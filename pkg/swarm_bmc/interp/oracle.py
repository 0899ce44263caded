"""Exhaustive enumeration of nondet tapes, the brute-force ground truth.

Tapes are explored depth first: a prefix that runs out of values is extended
by every domain value of the havoc that found the tape empty, in ascending
order, so the first failing tape found is the lexicographically first one.
"""

import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import Optional

from swarm_bmc.config import DEFAULT_STEP_LIMIT, DEFAULT_WIDTH, ORACLE_SPACE_LIMIT
from swarm_bmc.errors import SpaceTooLarge
from swarm_bmc.frontend.syntax import For, Havoc, If, Program, Stmt, While
from swarm_bmc.interp.interpreter import ExecutionOutcome, NondetTape, OutcomeKind, execute
from swarm_bmc.semantics import wrap
from swarm_bmc.transform.inline import inline_calls
from swarm_bmc.transform.ssa import check_width
from swarm_bmc.transform.unroll import unroll

logger = logging.getLogger(__name__)

type HavocDomain = Sequence[int] | Mapping[str, Sequence[int]]


@dataclass(frozen=True)
class Fails:
    tape: NondetTape
    outcome: ExecutionOutcome


@dataclass(frozen=True)
class SafeWithinBound:
    explored: int
    completed: int


type OracleVerdict = Fails | SafeWithinBound


def havoc_sites(body: tuple[Stmt, ...]) -> Iterator[Havoc]:
    for stmt in body:
        match stmt:
            case Havoc():
                yield stmt
            case If(_, then, orelse):
                yield from havoc_sites(then)
                yield from havoc_sites(orelse)
            case While(_, inner):
                yield from havoc_sites(inner)
            case For(init, _, step, inner):
                yield from havoc_sites(tuple(s for s in (init, step) if s is not None))
                yield from havoc_sites(inner)


class TapeSpace:
    def __init__(self, width: int, havoc_domain: Optional[HavocDomain]):
        half = 1 << (width - 1)
        self.full = list(range(-half, half))
        self.width = width
        self.domain = havoc_domain

    def values(self, variable: Optional[str]) -> list[int]:
        if self.domain is None:
            return self.full
        if isinstance(self.domain, Mapping):
            chosen = self.domain.get(variable)
            return self.full if chosen is None else sorted({wrap(v, self.width) for v in chosen})
        return sorted({wrap(v, self.width) for v in self.domain})

    def size(self, p: Program, k: int) -> int:
        """Largest product of domain sizes along any single path of the unrolled program"""
        targets = {}
        for func in p.functions:
            for site in havoc_sites(func.body):
                targets[site.id] = site.target
        unrolled = unroll(inline_calls(p), k)
        return self.path_size(unrolled, unrolled.entry_function.body, targets)

    def path_size(self, p: Program, body: tuple[Stmt, ...], targets: dict[int, str]) -> int:
        total = 1
        for stmt in body:
            match stmt:
                case Havoc():
                    total *= len(self.values(targets.get(p.root_id(stmt.id), stmt.target)))
                case If(_, then, orelse):
                    total *= max(self.path_size(p, then, targets), self.path_size(p, orelse, targets))
        return total


def explore(p: Program, k: int, width: int = DEFAULT_WIDTH, havoc_domain: Optional[HavocDomain] = None,
            step_limit: int = DEFAULT_STEP_LIMIT,
            limit: int = ORACLE_SPACE_LIMIT) -> Iterator[tuple[NondetTape, ExecutionOutcome]]:
    """Yield every maximal tape with its outcome, in lexicographic order"""
    check_width(width)
    space = TapeSpace(width, havoc_domain)
    size = space.size(p, k)
    if size > limit:
        raise SpaceTooLarge(size, limit)
    stack: list[tuple[int, ...]] = [()]
    while stack:
        prefix = stack.pop()
        outcome = execute(p, NondetTape(prefix), step_limit, width, unwind=k)
        if outcome.kind is OutcomeKind.TAPE_EXHAUSTED:
            for value in reversed(space.values(outcome.variable)):
                stack.append(prefix + (value,))
            continue
        yield NondetTape(prefix), outcome


def enumerate_bounded(p: Program, k: int, width: int = DEFAULT_WIDTH, havoc_domain: Optional[HavocDomain] = None,
                      step_limit: int = DEFAULT_STEP_LIMIT) -> OracleVerdict:
    """Find the first failing tape over executions with at most k iterations per loop."""
    explored = completed = 0
    for tape, outcome in explore(p, k, width, havoc_domain, step_limit):
        explored += 1
        if outcome.kind is OutcomeKind.ASSERTION_VIOLATION:
            logger.debug("oracle found failing tape %s after %d executions", tape, explored)
            return Fails(tape, outcome)
        if outcome.kind is OutcomeKind.COMPLETED:
            completed += 1
    logger.debug("oracle exhausted %d executions (%d completed)", explored, completed)
    return SafeWithinBound(explored, completed)


def failing_tapes(p: Program, k: int, width: int = DEFAULT_WIDTH,
                  havoc_domain: Optional[HavocDomain] = None) -> list[NondetTape]:
    return [tape for tape, outcome in explore(p, k, width, havoc_domain)
            if outcome.kind is OutcomeKind.ASSERTION_VIOLATION]


def completed_tapes(p: Program, k: int, width: int = DEFAULT_WIDTH,
                    havoc_domain: Optional[HavocDomain] = None) -> list[NondetTape]:
    return [tape for tape, outcome in explore(p, k, width, havoc_domain)
            if outcome.kind is OutcomeKind.COMPLETED]
