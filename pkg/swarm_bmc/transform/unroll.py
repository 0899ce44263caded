"""Bounded loop unrolling with unwinding assumptions."""

import logging

from swarm_bmc.frontend.syntax import Assume, For, FunctionDef, If, Program, Stmt, Unary, While
from swarm_bmc.transform.rewrite import IdAllocator, copy_stmt

logger = logging.getLogger(__name__)


class Unroller:
    def __init__(self, program: Program, k: int):
        self.k = k
        self.ids = IdAllocator(program)
        self.loops = 0

    def block(self, body: tuple[Stmt, ...], copying: bool) -> tuple[Stmt, ...]:
        out: list[Stmt] = []
        for stmt in body:
            match stmt:
                case While(cond, inner):
                    out.extend(self.unwind(stmt, cond, inner, None))
                case For(init, cond, step, inner):
                    if init is not None:
                        out.append(copy_stmt(init, self.ids) if copying else init)
                    out.extend(self.unwind(stmt, cond, inner, step))
                case If(cond, then, orelse) if not copying:
                    out.append(If(cond, self.block(then, False), self.block(orelse, False), id=stmt.id))
                case _ if not copying:
                    out.append(stmt)
                case _:
                    out.append(copy_stmt(stmt, self.ids, inner=lambda b: self.block(b, True)))
        return tuple(out)

    def unwind(self, loop: Stmt, cond, inner: tuple[Stmt, ...], step) -> list[Stmt]:
        """`if (c) { body; if (c) { body; ... assume(!c); } }` with k copies of the body"""
        self.loops += 1
        nested: tuple[Stmt, ...] = (Assume(Unary("!", cond), id=self.ids.derive(loop.id)),)
        for _ in range(self.k):
            body = self.block(inner, True)
            if step is not None:
                body = body + (copy_stmt(step, self.ids),)
            nested = (If(cond, body + nested, id=self.ids.derive(loop.id)),)
        return list(nested)


def unroll(p: Program, k: int) -> Program:
    """Replace every loop by k guarded copies of its body followed by an unwinding assumption."""
    if k < 1:
        raise ValueError(f"unwind bound must be at least 1, got {k}")
    unroller = Unroller(p, k)
    functions = tuple(FunctionDef(f.name, f.params, unroller.block(f.body, False), id=f.id)
                      for f in p.functions)
    logger.debug("unrolled %d loop instance(s) with k=%d", unroller.loops, k)
    return unroller.ids.finish(p, functions=functions)
