"""Assumption propagation and cone-of-influence slicing of SSA programs."""

import logging
from typing import Iterator

from swarm_bmc.semantics import apply_binary, apply_unary
from swarm_bmc.transform.ssa import (
    BOOL, FALSE, TRUE, AssertStep, AssumeStep, Equation, Nondet, SBinary, SConst, SExpr, SName, SPhi,
    SRead, SSelect, SUnary, SsaProgram, Step,
)

logger = logging.getLogger(__name__)


class Folder:
    """Constant folding under a substitution of names by constants or other names"""
    def __init__(self, width: int):
        self.width = width
        self.subst: dict[str, SExpr] = {}

    def fold(self, e: SExpr) -> SExpr:
        match e:
            case SName(name):
                return self.subst.get(name, e)
            case SConst():
                return e
            case SUnary(op, operand):
                x = self.fold(operand)
                if isinstance(x, SConst):
                    return SConst(apply_unary(op, x.value, self.width))
                if op == "!" and isinstance(x, SUnary) and x.op == "!":
                    return x.operand
                return SUnary(op, x)
            case SBinary("&&", left, right):
                lv, rv = self.fold(left), self.fold(right)
                if lv == FALSE or rv == FALSE:
                    return FALSE
                if lv == TRUE:
                    return rv
                if rv == TRUE:
                    return lv
                return SBinary("&&", lv, rv)
            case SBinary("||", left, right):
                lv, rv = self.fold(left), self.fold(right)
                if lv == TRUE or rv == TRUE:
                    return TRUE
                if lv == FALSE:
                    return rv
                if rv == FALSE:
                    return lv
                return SBinary("||", lv, rv)
            case SBinary(op, left, right):
                lv, rv = self.fold(left), self.fold(right)
                if isinstance(lv, SConst) and isinstance(rv, SConst):
                    if not (op in ("/", "%") and rv.value == 0):
                        return SConst(apply_binary(op, lv.value, rv.value, self.width))
                return SBinary(op, lv, rv)
            case SSelect(cond, then, orelse):
                c = self.fold(cond)
                if c == TRUE:
                    return self.fold(then)
                if c == FALSE:
                    return self.fold(orelse)
                t, f = self.fold(then), self.fold(orelse)
                return t if t == f else SSelect(c, t, f)
            case SPhi(then_guard, then, else_guard, orelse):
                tg, eg = self.fold(then_guard), self.fold(else_guard)
                if tg == FALSE:
                    return self.fold(orelse)
                if tg == TRUE or eg == FALSE:
                    return self.fold(then)
                t, f = self.fold(then), self.fold(orelse)
                return t if t == f else SPhi(tg, t, eg, f)
            case SRead(array, elements, index):
                idx = self.fold(index)
                items = tuple(self.fold(x) for x in elements)
                if isinstance(idx, SConst):
                    return items[idx.value] if 0 <= idx.value < len(items) else items[0]
                if all(x == items[0] for x in items):
                    return items[0]
                return SRead(array, items, idx)
        raise NotImplementedError(f"folding for {e} is not implemented!")


def names_of(e: SExpr) -> Iterator[str]:
    match e:
        case SName(name):
            yield name
        case SUnary(_, operand):
            yield from names_of(operand)
        case SBinary(_, left, right):
            yield from names_of(left)
            yield from names_of(right)
        case SSelect(cond, then, orelse):
            yield from names_of(cond)
            yield from names_of(then)
            yield from names_of(orelse)
        case SPhi(then_guard, then, else_guard, orelse):
            yield from names_of(then_guard)
            yield from names_of(then)
            yield from names_of(else_guard)
            yield from names_of(orelse)
        case SRead(_, elements, index):
            for x in elements:
                yield from names_of(x)
            yield from names_of(index)


def simplify(s: SsaProgram) -> SsaProgram:
    """Guard forcing and constant folding.

    After `assume(false)` under guard g, g is false for every later step;
    under a true guard nothing after it can be violated. Equations that fold
    to a constant or a name are substituted away.
    """
    folder = Folder(s.width)
    out: list[Step] = []
    blocked = False
    for step in s.steps:
        if blocked:
            if isinstance(step, Nondet):
                out.append(Nondet(step.name, step.stmt_id, FALSE))
            continue
        match step:
            case Equation(name, expr, guard):
                g = folder.fold(guard)
                if g == FALSE:
                    folder.subst[name] = FALSE if s.types.get(name) == BOOL else SConst(0)
                    continue
                e = folder.fold(expr)
                if isinstance(e, (SConst, SName)):
                    folder.subst[name] = e
                    continue
                out.append(Equation(name, e, g))
            case Nondet(name, stmt_id, guard):
                out.append(Nondet(name, stmt_id, folder.fold(guard)))
            case AssumeStep(guard, cond, stmt_id):
                g, c = folder.fold(guard), folder.fold(cond)
                if g == FALSE or c == TRUE:
                    continue
                if c == FALSE:
                    if g == TRUE:
                        blocked = True
                        continue
                    if isinstance(g, SName):
                        folder.subst[g.name] = FALSE
                out.append(AssumeStep(g, c, stmt_id))
            case AssertStep(aid, guard, cond, stmt_id, kind):
                g, c = folder.fold(guard), folder.fold(cond)
                if g == FALSE or c == TRUE:
                    continue
                out.append(AssertStep(aid, g, c, stmt_id, kind))
    return SsaProgram(tuple(out), s.width, s.types, s.unwind_bound)


def cone_of_influence(s: SsaProgram) -> SsaProgram:
    """Keep the equations that asserts and earlier assumes depend on; nondets always stay."""
    last_assert = max((i for i, step in enumerate(s.steps) if isinstance(step, AssertStep)), default=-1)
    needed: set[str] = set()
    keep = [False] * len(s.steps)
    for i in reversed(range(len(s.steps))):
        step = s.steps[i]
        match step:
            case AssertStep(_, guard, cond) | AssumeStep(guard, cond) if i <= last_assert:
                keep[i] = True
                needed.update(names_of(guard))
                needed.update(names_of(cond))
            case Equation(name, expr) if name in needed:
                keep[i] = True
                needed.update(names_of(expr))
            case Nondet():
                keep[i] = True

    kept: list[Step] = []
    defined: set[str] = set()
    for i, step in enumerate(s.steps):
        if not keep[i]:
            continue
        match step:
            case Equation(name, expr, guard):
                if not set(names_of(guard)) <= defined:
                    step = Equation(name, expr, TRUE)
                defined.add(name)
            case Nondet(name, stmt_id, guard):
                if not set(names_of(guard)) <= defined:
                    step = Nondet(name, stmt_id, TRUE)
                defined.add(name)
        kept.append(step)
    types = {name: t for name, t in s.types.items() if name in defined}
    return SsaProgram(tuple(kept), s.width, types, s.unwind_bound)


def slice_ssa(s: SsaProgram) -> SsaProgram:
    """Guard forcing plus cone of influence; equisatisfiable for the violation query."""
    result = cone_of_influence(simplify(s))
    logger.debug("sliced %d steps down to %d (%d -> %d equations)",
                 len(s.steps), len(result.steps), len(s.defs), len(result.defs))
    return result
