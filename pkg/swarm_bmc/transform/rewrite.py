"""Helpers shared by the program-to-program rewrites."""

from dataclasses import replace
from typing import Callable, Iterable, Mapping

from swarm_bmc.frontend.syntax import (
    Assert, Assign, Assume, Binary, BoolLit, Call, Decl, Expr, For, Havoc, If, Index, IntLit, Log,
    Program, Return, SourceLocation, Stmt, Unary, Var, VarDecl, While,
)


class IdAllocator:
    """Hands out statement ids above every id already used by a program.

    Each fresh id inherits the source location of the statement it derives
    from and is recorded in `origins`, so diagnostics resolve to user code.
    """
    def __init__(self, program: Program):
        self.program = program
        self.next = program.next_id
        self.source_map: dict[int, SourceLocation] = dict(program.source_map)
        self.origins: dict[int, int] = dict(program.origins)

    def derive(self, original: int) -> int:
        sid = self.next
        self.next += 1
        self.origins[sid] = original
        self.source_map[sid] = self.program.location(original)
        return sid

    def fresh(self, location: SourceLocation) -> int:
        sid = self.next
        self.next += 1
        self.source_map[sid] = location
        return sid

    def finish(self, program: Program, **changes) -> Program:
        return replace(program, source_map=self.source_map, origins=self.origins, **changes)


def rename_expr(e: Expr, names: Mapping[str, str]) -> Expr:
    match e:
        case Var(name):
            return Var(names.get(name, name))
        case Index(array, index):
            return Index(array, rename_expr(index, names))
        case Unary(op, operand):
            return Unary(op, rename_expr(operand, names))
        case Binary(op, left, right):
            return Binary(op, rename_expr(left, names), rename_expr(right, names))
        case IntLit() | BoolLit():
            return e
    raise NotImplementedError(f"renaming for {type(e)} is not implemented!")


def conjunction(exprs: Iterable[Expr]) -> Expr:
    result = None
    for e in exprs:
        result = e if result is None else Binary("&&", result, e)
    return result if result is not None else BoolLit(True)


def copy_stmt(stmt: Stmt, ids: IdAllocator, names: Mapping[str, str] | None = None,
              inner: Callable[[tuple[Stmt, ...]], tuple[Stmt, ...]] | None = None) -> Stmt:
    """Copy one statement with a derived id and renamed variables.

    Nested blocks are passed through `inner` when given, otherwise copied
    recursively with the same renaming.
    """
    names = names or {}

    def block(body: tuple[Stmt, ...]) -> tuple[Stmt, ...]:
        if inner is not None:
            return inner(body)
        return tuple(copy_stmt(s, ids, names) for s in body)

    def expr(e: Expr) -> Expr:
        return rename_expr(e, names)

    sid = ids.derive(stmt.id)
    match stmt:
        case Decl(name, init):
            return Decl(names.get(name, name), None if init is None else expr(init), id=sid)
        case Assign(target, value):
            return Assign(expr(target), expr(value), id=sid)
        case Havoc(target):
            return Havoc(names.get(target, target), id=sid)
        case If(cond, then, orelse):
            return If(expr(cond), block(then), block(orelse), id=sid)
        case While(cond, body):
            return While(expr(cond), block(body), id=sid)
        case For(init, cond, step, body):
            init = None if init is None else copy_stmt(init, ids, names)
            step = None if step is None else copy_stmt(step, ids, names)
            return For(init, expr(cond), step, block(body), id=sid)
        case Call(func, args, target):
            return Call(func, tuple(expr(a) for a in args),
                        None if target is None else names.get(target, target), id=sid)
        case Return(value):
            return Return(None if value is None else expr(value), id=sid)
        case Assert(cond):
            return Assert(expr(cond), id=sid)
        case Assume(cond):
            return Assume(expr(cond), id=sid)
        case Log(label):
            return Log(label, id=sid)
    raise NotImplementedError(f"copying for {type(stmt)} is not implemented!")


def names_in_program(program: Program) -> set[str]:
    """Every variable, parameter, array and function name the program mentions"""
    names: set[str] = set(program.constants)
    names.update(g.name for g in program.globals)

    def visit_expr(e: Expr):
        match e:
            case Var(name):
                names.add(name)
            case Index(array, index):
                names.add(array)
                visit_expr(index)
            case Unary(_, operand):
                visit_expr(operand)
            case Binary(_, left, right):
                visit_expr(left)
                visit_expr(right)

    def visit(body: tuple[Stmt, ...]):
        for stmt in body:
            match stmt:
                case Decl(name, init):
                    names.add(name)
                    if init is not None:
                        visit_expr(init)
                case Assign(target, value):
                    visit_expr(target)
                    visit_expr(value)
                case Havoc(target):
                    names.add(target)
                case If(cond, then, orelse):
                    visit_expr(cond)
                    visit(then)
                    visit(orelse)
                case While(cond, inner):
                    visit_expr(cond)
                    visit(inner)
                case For(init, cond, step, inner):
                    visit(tuple(s for s in (init, step) if s is not None))
                    visit_expr(cond)
                    visit(inner)
                case Call(_, args, target):
                    for a in args:
                        visit_expr(a)
                    if target is not None:
                        names.add(target)
                case Return(value) if value is not None:
                    visit_expr(value)
                case Assert(cond) | Assume(cond):
                    visit_expr(cond)

    for func in program.functions:
        names.add(func.name)
        names.update(func.params)
        visit(func.body)
    return names


class FreshNames:
    def __init__(self, taken: set[str]):
        self.taken = set(taken)

    def __call__(self, base: str) -> str:
        name = base
        n = 1
        while name in self.taken:
            n += 1
            name = f"{base}_{n}"
        self.taken.add(name)
        return name


def global_decl(name: str, ids: IdAllocator, location: SourceLocation) -> VarDecl:
    return VarDecl(name, None, IntLit(0), id=ids.fresh(location))
