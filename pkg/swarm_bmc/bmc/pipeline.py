"""Single-variant bounded model checking.

inline -> unroll -> SSA -> (slice) -> encode -> solve -> decode
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from swarm_bmc.bmc.counterexample import Counterexample, decode_model
from swarm_bmc.config import DEFAULT_DEPTH, DEFAULT_WIDTH
from swarm_bmc.encode.bitblast import EncodedInstance, encode
from swarm_bmc.encode.slicer import slice_ssa
from swarm_bmc.frontend.features import FeatureSet
from swarm_bmc.frontend.syntax import Program
from swarm_bmc.interp.replay import replay
from swarm_bmc.sat.cdcl import UNLIMITED, CancelFlag, Sat, SolveBudget, Unknown, Unsat, check_model
from swarm_bmc.sat.z3_backend import solve_with
from swarm_bmc.transform.inline import inline_calls
from swarm_bmc.transform.ssa import SsaProgram, check_width, to_ssa
from swarm_bmc.transform.unroll import unroll
from swarm_bmc.transform.variants import VariantProgram

logger = logging.getLogger(__name__)

BACKENDS = ("cdcl", "z3")


@dataclass(frozen=True)
class BmcOptions:
    depth: int = DEFAULT_DEPTH
    width: int = DEFAULT_WIDTH
    slicing: bool = False
    budget: SolveBudget = UNLIMITED
    seed: int = 0
    backend: str = "cdcl"

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be at least 1, got {self.depth}")
        check_width(self.width)
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown solver backend {self.backend!r}")


class Status(Enum):
    COUNTEREXAMPLE = "counterexample"
    VERIFIED = "verified"
    RESOURCE_OUT = "resource_out"


@dataclass(frozen=True)
class Metrics:
    num_vars: int = 0
    num_clauses: int = 0
    encode_ms: float = 0.0
    solve_ms: float = 0.0
    sliced: bool = False

    def to_json(self) -> dict[str, Any]:
        return {"vars": self.num_vars, "clauses": self.num_clauses, "encode_ms": round(self.encode_ms, 3),
                "solve_ms": round(self.solve_ms, 3)}


@dataclass(frozen=True)
class VerificationOutcome:
    status: Status
    depth: int
    metrics: Metrics = field(default_factory=Metrics, compare=False)
    counterexample: Optional[Counterexample] = None
    reason: Optional[str] = None

    def __str__(self):
        match self.status:
            case Status.COUNTEREXAMPLE:
                return f"counterexample: {self.counterexample}"
            case Status.VERIFIED:
                return f"verified to depth {self.depth}"
        return f"resource out ({self.reason})"

    def to_json(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "depth": self.depth,
            "reason": self.reason,
            "metrics": self.metrics.to_json(),
            "counterexample": None if self.counterexample is None else self.counterexample.to_json(),
        }


@dataclass(frozen=True)
class PreparedInstance:
    """Everything up to the SAT call"""
    base: Program
    checked: Program
    omitted: FeatureSet
    required: FeatureSet
    ssa: SsaProgram
    sliced: SsaProgram
    encoded: EncodedInstance


def unpack(p: Program | VariantProgram) -> tuple[Program, Program, FeatureSet, FeatureSet]:
    if isinstance(p, VariantProgram):
        return p.base, p.program, p.omitted, p.required
    return p, p, FeatureSet(), FeatureSet()


class Cancelled(Exception):
    pass


def poll(cancel: Optional[CancelFlag]):
    if cancel is not None and cancel.is_set():
        raise Cancelled()


def prepare(p: Program | VariantProgram, opts: BmcOptions, cancel: Optional[CancelFlag] = None) -> PreparedInstance:
    base, checked, omitted, required = unpack(p)
    inlined = inline_calls(checked)
    poll(cancel)
    unrolled = unroll(inlined, opts.depth)
    poll(cancel)
    ssa = to_ssa(unrolled, opts.width, opts.depth)
    poll(cancel)
    sliced = slice_ssa(ssa) if opts.slicing else ssa
    poll(cancel)
    encoded = encode(sliced, opts.width, opts.slicing)
    return PreparedInstance(base, checked, omitted, required, ssa, sliced, encoded)


def solve_prepared(prepared: PreparedInstance, opts: BmcOptions,
                   cancel: Optional[CancelFlag] = None) -> VerificationOutcome:
    encoded = prepared.encoded
    result = solve_with(opts.backend, encoded.cnf, opts.budget, opts.seed, cancel)
    metrics = Metrics(encoded.stats.num_vars, encoded.stats.num_clauses, encoded.stats.encode_ms,
                      result.stats.solve_ms, opts.slicing)
    match result:
        case Sat(model):
            if not check_model(encoded.cnf, model):
                logger.error("solver model fails the formula of %s", prepared.checked.entry)
            cex = decode_model(model, encoded, prepared.ssa, prepared.base, opts.depth,
                               prepared.omitted, prepared.required)
            outcome = VerificationOutcome(Status.COUNTEREXAMPLE, opts.depth, metrics, cex)
        case Unsat():
            outcome = VerificationOutcome(Status.VERIFIED, opts.depth, metrics)
        case Unknown(reason):
            outcome = VerificationOutcome(Status.RESOURCE_OUT, opts.depth, metrics, reason=reason)
    logger.debug("check depth=%d sliced=%s: %s (%s)", opts.depth, opts.slicing, outcome.status.value,
                 encoded.stats)
    return outcome


def check(p: Program | VariantProgram, opts: BmcOptions = BmcOptions(),
          cancel: Optional[CancelFlag] = None) -> VerificationOutcome:
    """Bounded check of every assertion over executions with at most depth iterations per loop."""
    try:
        prepared = prepare(p, opts, cancel)
        poll(cancel)
    except Cancelled:
        return VerificationOutcome(Status.RESOURCE_OUT, opts.depth, Metrics(sliced=opts.slicing), reason="cancelled")
    return solve_prepared(prepared, opts, cancel)


def validate_outcome(base: Program, outcome: VerificationOutcome) -> VerificationOutcome:
    """Replay a counterexample on the base program; one that does not replay is never reported"""
    if outcome.status is not Status.COUNTEREXAMPLE or replay(base, outcome.counterexample):
        return outcome
    logger.error("counterexample does not replay on the base program: %s", outcome.counterexample)
    return VerificationOutcome(Status.RESOURCE_OUT, outcome.depth, outcome.metrics, reason="replay-failed")
