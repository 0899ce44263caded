"""Feature omission and feature requirement variants of a program."""

import logging
import re
from dataclasses import dataclass
from typing import Iterable

from swarm_bmc.errors import FeatureConflict, UnknownFeature
from swarm_bmc.frontend.features import FeatureSet, extract_features
from swarm_bmc.frontend.syntax import (
    Assign, Assume, Binary, BoolLit, For, FunctionDef, If, IntLit, Log, Program, Return, Stmt, Var,
    While,
)
from swarm_bmc.transform.rewrite import FreshNames, IdAllocator, conjunction, global_decl, names_in_program

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VariantProgram:
    base: Program
    omitted: FeatureSet
    required: FeatureSet
    program: Program

    @property
    def label(self) -> str:
        return "+".join(self.omitted) or "baseline"


def flag_name(label: str) -> str:
    return "seen_" + (re.sub(r"[^A-Za-z0-9_]", "_", label) or "_")


class LogRewriter:
    def __init__(self, omitted: FeatureSet, flags: dict[str, str]):
        self.omitted = omitted
        self.flags = flags

    def block(self, body: tuple[Stmt, ...]) -> tuple[Stmt, ...]:
        out: list[Stmt] = []
        for stmt in body:
            match stmt:
                case Log(label) if label in self.omitted:
                    out.append(Assume(BoolLit(False), id=stmt.id))
                case Log(label) if label in self.flags:
                    out.append(Assign(Var(self.flags[label]), IntLit(1), id=stmt.id))
                case Log():
                    pass
                case If(cond, then, orelse):
                    out.append(If(cond, self.block(then), self.block(orelse), id=stmt.id))
                case While(cond, inner):
                    out.append(While(cond, self.block(inner), id=stmt.id))
                case For(init, cond, step, inner):
                    out.append(For(init, cond, step, self.block(inner), id=stmt.id))
                case _:
                    out.append(stmt)
        return tuple(out)


def guard_exits(body: tuple[Stmt, ...], exit_check, ids: IdAllocator) -> tuple[Stmt, ...]:
    """Insert the exit assumption before every return of the entry function"""
    out: list[Stmt] = []
    for stmt in body:
        match stmt:
            case Return():
                out.append(Assume(exit_check, id=ids.derive(stmt.id)))
                out.append(stmt)
            case If(cond, then, orelse):
                out.append(If(cond, guard_exits(then, exit_check, ids), guard_exits(orelse, exit_check, ids),
                              id=stmt.id))
            case While(cond, inner):
                out.append(While(cond, guard_exits(inner, exit_check, ids), id=stmt.id))
            case For(init, cond, step, inner):
                out.append(For(init, cond, step, guard_exits(inner, exit_check, ids), id=stmt.id))
            case _:
                out.append(stmt)
    return tuple(out)


def make_variant(p: Program, omitted: Iterable[str] = (), required: Iterable[str] = ()) -> VariantProgram:
    """Build the variant that blocks omitted features and demands required ones.

    Omitted `log` sites become `assume(false)`. Each required label gets a
    global flag set at its log sites, the entry function may only exit once
    every flag is set, and a failing check only counts as a violation after
    all flags are set (the flags form the program's assertion gate). All other
    logs are deleted.
    """
    omitted = FeatureSet(omitted)
    required = FeatureSet(required)
    features = extract_features(p)
    unknown = omitted.union(required).difference(features)
    if unknown:
        raise UnknownFeature(unknown)
    conflict = omitted.intersection(required)
    if conflict:
        raise FeatureConflict(conflict)

    ids = IdAllocator(p)
    fresh = FreshNames(names_in_program(p))
    flags = {label: fresh(flag_name(label)) for label in required}
    rewriter = LogRewriter(omitted, flags)
    functions = []
    for func in p.functions:
        body = rewriter.block(func.body)
        if flags and func.name == p.entry:
            exit_check = conjunction(Binary("!=", Var(flag), IntLit(0)) for flag in flags.values())
            body = guard_exits(body, exit_check, ids)
            body = body + (Assume(exit_check, id=ids.derive(func.id)),)
        functions.append(FunctionDef(func.name, func.params, body, id=func.id))

    entry_location = p.location(p.entry_function.id)
    globals_ = p.globals + tuple(global_decl(flag, ids, entry_location) for flag in flags.values())
    program = ids.finish(p, functions=tuple(functions), globals=globals_,
                         assert_gate=p.assert_gate + tuple(flags.values()))
    logger.debug("variant omitted=%s required=%s", omitted, required)
    return VariantProgram(p, omitted, required, program)


def omit_features(p: Program, omitted: Iterable[str]) -> VariantProgram:
    return make_variant(p, omitted, ())


def require_features(p: Program, required: Iterable[str]) -> VariantProgram:
    return make_variant(p, (), required)
