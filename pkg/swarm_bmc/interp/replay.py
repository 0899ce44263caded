"""Counterexample replay on a concrete program."""

import logging
from typing import TYPE_CHECKING

from swarm_bmc.config import DEFAULT_STEP_LIMIT
from swarm_bmc.frontend.syntax import Program
from swarm_bmc.interp.interpreter import ExecutionOutcome, execute

if TYPE_CHECKING:
    from swarm_bmc.bmc.counterexample import Counterexample

logger = logging.getLogger(__name__)


def replay_outcome(p: Program, cex: "Counterexample", step_limit: int = DEFAULT_STEP_LIMIT) -> ExecutionOutcome:
    return execute(p, cex.tape, step_limit, cex.width)


def confirms(p: Program, cex: "Counterexample", outcome: ExecutionOutcome) -> bool:
    if not outcome.violated:
        return False
    if cex.violated_assert >= 0:
        return outcome.stmt_id == cex.violated_assert
    return p.location(outcome.stmt_id).line == cex.location.line


def replay(p_base: Program, cex: "Counterexample") -> bool:
    """True iff running p_base on the tape violates the recorded assertion."""
    outcome = replay_outcome(p_base, cex)
    ok = confirms(p_base, cex, outcome)
    if not ok:
        logger.debug("replay of %s ended with %s", cex, outcome)
    return ok
