"""Concrete evaluation of an SsaProgram for given nondet values."""

from dataclasses import dataclass
from typing import Mapping, Optional

from swarm_bmc.semantics import apply_binary, apply_unary, wrap
from swarm_bmc.transform.ssa import (
    AssertStep, AssumeStep, Equation, Nondet, SBinary, SConst, SExpr, SName, SPhi, SRead, SSelect, SUnary,
    SsaProgram,
)


def eval_sexpr(e: SExpr, env: Mapping[str, int | bool], width: int) -> int | bool:
    match e:
        case SConst(value):
            return value
        case SName(name):
            return env[name]
        case SUnary(op, operand):
            return apply_unary(op, eval_sexpr(operand, env, width), width)
        case SBinary(op, left, right):
            return apply_binary(op, eval_sexpr(left, env, width), eval_sexpr(right, env, width), width)
        case SSelect(cond, then, orelse) | SPhi(cond, then, _, orelse):
            return eval_sexpr(then if eval_sexpr(cond, env, width) else orelse, env, width)
        case SRead(_, elements, index):
            i = eval_sexpr(index, env, width)
            return eval_sexpr(elements[i] if 0 <= i < len(elements) else elements[0], env, width)
    raise NotImplementedError(f"evaluation for {e} is not implemented!")


@dataclass(frozen=True)
class SsaRun:
    env: dict[str, int | bool]
    # havoc names whose guard held, in program order
    executed: tuple[str, ...]
    violated: Optional[AssertStep]
    blocked: bool


def run_ssa(s: SsaProgram, nondets: Mapping[str, int]) -> SsaRun:
    """Evaluate every step; stop at the first violation or failed assumption.

    Missing nondet values default to 0.
    """
    env: dict[str, int | bool] = {}
    executed: list[str] = []
    for step in s.steps:
        match step:
            case Nondet(name, _, guard):
                env[name] = wrap(nondets.get(name, 0), s.width)
                if eval_sexpr(guard, env, s.width):
                    executed.append(name)
            case Equation(name, expr):
                env[name] = eval_sexpr(expr, env, s.width)
            case AssumeStep(guard, cond):
                if eval_sexpr(guard, env, s.width) and not eval_sexpr(cond, env, s.width):
                    return SsaRun(env, tuple(executed), None, True)
            case AssertStep(_, guard, cond):
                if eval_sexpr(guard, env, s.width) and not eval_sexpr(cond, env, s.width):
                    return SsaRun(env, tuple(executed), step, False)
    return SsaRun(env, tuple(executed), None, False)
