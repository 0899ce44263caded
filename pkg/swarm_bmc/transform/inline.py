"""Call inlining with return lowering.

Each call site gets its own copy of the callee in which parameters and locals
are renamed to fresh names. Returns become an assignment to a result variable
plus a `done` flag that guards the rest of the callee; the flag is only
introduced when some return is not the last statement.
"""

import logging
from dataclasses import replace
from typing import Mapping, Optional

from swarm_bmc.frontend.syntax import (
    Assign, Binary, Call, Decl, Expr, For, FunctionDef, If, IntLit, Program, Return, Stmt, Var, While,
)
from swarm_bmc.transform.rewrite import FreshNames, IdAllocator, copy_stmt, names_in_program, rename_expr

logger = logging.getLogger(__name__)


def declared_names(body: tuple[Stmt, ...]) -> set[str]:
    names = set()
    for stmt in body:
        match stmt:
            case Decl(name):
                names.add(name)
            case If(_, then, orelse):
                names |= declared_names(then) | declared_names(orelse)
            case While(_, inner):
                names |= declared_names(inner)
            case For(init, _, _, inner):
                if init is not None:
                    names |= declared_names((init,))
                names |= declared_names(inner)
    return names


def has_early_return(body: tuple[Stmt, ...]) -> bool:
    def contains_return(stmts: tuple[Stmt, ...]) -> bool:
        for stmt in stmts:
            match stmt:
                case Return():
                    return True
                case If(_, then, orelse) if contains_return(then) or contains_return(orelse):
                    return True
                case While(_, inner) | For(body=inner) if contains_return(inner):
                    return True
        return False

    if not body:
        return False
    return contains_return(body[:-1]) or (not isinstance(body[-1], Return) and contains_return(body[-1:]))


class ReturnLowering:
    def __init__(self, ids: IdAllocator, result: Optional[str], done: Optional[str]):
        self.ids = ids
        self.result = result
        self.done = done

    def not_done(self) -> Expr:
        return Binary("==", Var(self.done), IntLit(0))

    def guarded_rest(self, out: list[Stmt], rest: tuple[Stmt, ...], origin: int) -> tuple[list[Stmt], bool]:
        lowered, _ = self.block(rest)
        if lowered:
            out.append(If(self.not_done(), tuple(lowered), id=self.ids.derive(origin)))
        return out, True

    def block(self, body: tuple[Stmt, ...]) -> tuple[list[Stmt], bool]:
        """Lower one block; the flag says whether it may have returned"""
        out: list[Stmt] = []
        for i, stmt in enumerate(body):
            rest = body[i + 1:]
            match stmt:
                case Return(value):
                    if self.result is not None and value is not None:
                        out.append(Assign(Var(self.result), value, id=self.ids.derive(stmt.id)))
                    if self.done is not None:
                        out.append(Assign(Var(self.done), IntLit(1), id=self.ids.derive(stmt.id)))
                    return out, True
                case If(cond, then, orelse):
                    then_l, then_r = self.block(then)
                    else_l, else_r = self.block(orelse)
                    out.append(If(cond, tuple(then_l), tuple(else_l), id=stmt.id))
                    if then_r or else_r:
                        return self.guarded_rest(out, rest, stmt.id)
                case While(cond, inner):
                    inner_l, returned = self.block(inner)
                    if returned:
                        out.append(While(Binary("&&", self.not_done(), cond), tuple(inner_l), id=stmt.id))
                        return self.guarded_rest(out, rest, stmt.id)
                    out.append(While(cond, tuple(inner_l), id=stmt.id))
                case For(init, cond, step, inner):
                    inner_l, returned = self.block(inner)
                    if returned:
                        if init is not None:
                            out.append(init)
                        if step is not None:
                            inner_l.append(If(self.not_done(), (step,), id=self.ids.derive(stmt.id)))
                        out.append(While(Binary("&&", self.not_done(), cond), tuple(inner_l), id=stmt.id))
                        return self.guarded_rest(out, rest, stmt.id)
                    out.append(For(init, cond, step, tuple(inner_l), id=stmt.id))
                case _:
                    out.append(stmt)
        return out, False


class Inliner:
    def __init__(self, program: Program):
        self.program = program
        self.ids = IdAllocator(program)
        self.fresh = FreshNames(names_in_program(program))
        self.instances: dict[str, int] = {}
        self.count = 0

    def block(self, body: tuple[Stmt, ...], names: Mapping[str, str], copying: bool) -> tuple[Stmt, ...]:
        out: list[Stmt] = []
        for stmt in body:
            match stmt:
                case Call():
                    out.extend(self.inline_call(stmt, names))
                case If(_, then, orelse) if not copying:
                    out.append(replace(stmt, then=self.block(then, names, False),
                                       orelse=self.block(orelse, names, False)))
                case While(_, inner) | For(body=inner) if not copying:
                    out.append(replace(stmt, body=self.block(inner, names, False)))
                case _ if not copying:
                    out.append(stmt)
                case _:
                    out.append(copy_stmt(stmt, self.ids, names, inner=lambda b: self.block(b, names, True)))
        return tuple(out)

    def inline_call(self, call: Call, caller_names: Mapping[str, str]) -> list[Stmt]:
        callee = self.program.function(call.func)
        n = self.instances.get(callee.name, 0) + 1
        self.instances[callee.name] = n
        self.count += 1
        prefix = f"{callee.name}_{n}"
        names = {local: self.fresh(f"{prefix}_{local}")
                 for local in (*callee.params, *sorted(declared_names(callee.body)))}

        stmts: list[Stmt] = []
        for param, arg in zip(callee.params, call.args):
            stmts.append(Decl(names[param], rename_expr(arg, caller_names), id=self.ids.derive(call.id)))
        result = self.fresh(f"{prefix}_result") if call.target is not None else None
        if result is not None:
            stmts.append(Decl(result, IntLit(0), id=self.ids.derive(call.id)))
        done = self.fresh(f"{prefix}_done") if has_early_return(callee.body) else None
        if done is not None:
            stmts.append(Decl(done, IntLit(0), id=self.ids.derive(call.id)))

        body = self.block(callee.body, names, True)
        lowered, _ = ReturnLowering(self.ids, result, done).block(body)
        stmts.extend(lowered)
        if result is not None:
            target = caller_names.get(call.target, call.target)
            stmts.append(Assign(Var(target), Var(result), id=self.ids.derive(call.id)))
        return stmts

    def run(self) -> Program:
        entry = self.program.entry_function
        body = self.block(entry.body, {}, False)
        done = self.fresh(f"{entry.name}_done") if has_early_return(body) else None
        lowered, _ = ReturnLowering(self.ids, None, done).block(body)
        if done is not None:
            lowered.insert(0, Decl(done, IntLit(0), id=self.ids.derive(entry.id)))
        main = FunctionDef(entry.name, (), tuple(lowered), id=entry.id)
        logger.debug("inlined %d call site(s) into %s", self.count, entry.name)
        functions = tuple(main if f.name == entry.name else f for f in self.program.functions)
        return self.ids.finish(self.program, functions=functions)


def inline_calls(p: Program) -> Program:
    """Inline every call reachable from the entry function.

    Only the entry function is rewritten; the other definitions are left as they are.
    """
    return Inliner(p).run()
