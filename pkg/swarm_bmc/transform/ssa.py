"""Static single assignment form of a loop-free, inlined program.

The SsaProgram is an ordered list of steps. Equations define names exactly
once; nondets introduce unconstrained names at Havoc sites; assumes and
asserts carry the path condition (guard) they were reached under. Arrays are
flattened into one name per element (`a[2]#3`), so array reads are
multiplexers over the current element names and writes are one select per
element.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from swarm_bmc.config import MAX_WIDTH, MIN_WIDTH
from swarm_bmc.errors import WidthOutOfRange
from swarm_bmc.frontend.syntax import (
    Assert, Assign, Assume, Binary, BoolLit, Decl, Expr, Havoc, If, Index, IntLit, Log, Program, Stmt,
    Unary, Var, const_value,
)
from swarm_bmc.semantics import wrap

logger = logging.getLogger(__name__)

INT = "int"
BOOL = "bool"


@dataclass(frozen=True)
class SExpr:
    pass


def _wrap(e: SExpr) -> str:
    if isinstance(e, (SBinary, SSelect, SPhi)):
        return f"({e})"
    return str(e)


@dataclass(frozen=True, eq=False)
class SConst(SExpr):
    value: int | bool

    # true and 1 are different constants
    def __eq__(self, other):
        return isinstance(other, SConst) and type(other.value) is type(self.value) and other.value == self.value

    def __hash__(self):
        return hash((type(self.value), self.value))

    def __str__(self):
        if isinstance(self.value, bool):
            return "true" if self.value else "false"
        return str(self.value)


TRUE = SConst(True)
FALSE = SConst(False)


@dataclass(frozen=True)
class SName(SExpr):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class SUnary(SExpr):
    op: str
    operand: SExpr

    def __str__(self):
        return f"{self.op}{_wrap(self.operand)}"


@dataclass(frozen=True)
class SBinary(SExpr):
    op: str
    left: SExpr
    right: SExpr

    def __str__(self):
        return f"{_wrap(self.left)} {self.op} {_wrap(self.right)}"


@dataclass(frozen=True)
class SSelect(SExpr):
    cond: SExpr
    then: SExpr
    orelse: SExpr

    def __str__(self):
        return f"{_wrap(self.cond)} ? {_wrap(self.then)} : {_wrap(self.orelse)}"


@dataclass(frozen=True)
class SPhi(SExpr):
    """Join of two branches: `then` when then_guard holds, `orelse` otherwise"""
    then_guard: SExpr
    then: SExpr
    else_guard: SExpr
    orelse: SExpr

    def __str__(self):
        return f"phi({self.then_guard}: {self.then}, {self.else_guard}: {self.orelse})"


@dataclass(frozen=True)
class SRead(SExpr):
    array: str
    elements: tuple[SExpr, ...]
    index: SExpr

    def __str__(self):
        return f"{self.array}{{{', '.join(str(e) for e in self.elements)}}}[{self.index}]"


@dataclass(frozen=True)
class Equation:
    name: str
    expr: SExpr
    guard: SExpr = TRUE


@dataclass(frozen=True)
class Nondet:
    name: str
    stmt_id: int
    guard: SExpr = TRUE


@dataclass(frozen=True)
class AssumeStep:
    guard: SExpr
    cond: SExpr
    stmt_id: int


@dataclass(frozen=True)
class AssertStep:
    aid: int
    guard: SExpr
    cond: SExpr
    stmt_id: int
    kind: str = "assert"


type Step = Equation | Nondet | AssumeStep | AssertStep


@dataclass(frozen=True)
class SsaProgram:
    steps: tuple[Step, ...]
    width: int
    types: dict[str, str] = field(default_factory=dict, compare=False)
    unwind_bound: Optional[int] = None

    @property
    def defs(self) -> list[Equation]:
        return [s for s in self.steps if isinstance(s, Equation)]

    @property
    def assumes(self) -> list[AssumeStep]:
        return [s for s in self.steps if isinstance(s, AssumeStep)]

    @property
    def asserts(self) -> list[AssertStep]:
        return [s for s in self.steps if isinstance(s, AssertStep)]

    @property
    def nondets(self) -> list[tuple[int, Nondet]]:
        """Havoc names with their position in program order"""
        return [(i, s) for i, s in enumerate(self.steps) if isinstance(s, Nondet)]

    @property
    def guards(self) -> dict[int, SExpr]:
        return {s.stmt_id: s.guard for s in self.steps if not isinstance(s, Equation)}

    def position_of(self, aid: int) -> int:
        for i, s in enumerate(self.steps):
            if isinstance(s, AssertStep) and s.aid == aid:
                return i
        raise KeyError(aid)


def check_width(width: int):
    if not MIN_WIDTH <= width <= MAX_WIDTH:
        raise WidthOutOfRange(width)


def conj(guard: SExpr, cond: SExpr) -> SExpr:
    if guard == TRUE:
        return cond
    return SBinary("&&", guard, cond)


class SsaBuilder:
    def __init__(self, program: Program, width: int):
        self.program = program
        self.width = width
        self.env: dict[str, SExpr] = {}
        self.versions: dict[str, int] = {}
        self.steps: list[Step] = []
        self.types: dict[str, str] = {}
        self.sizes = program.array_sizes()
        self.asserts = 0
        self.stmt_id = -1
        for g in program.globals:
            if g.is_array:
                for j in range(self.sizes[g.name]):
                    self.env[f"{g.name}[{j}]"] = SConst(0)
            else:
                self.env[g.name] = SConst(wrap(const_value(g.init) or 0, width))

    def fresh(self, key: str) -> str:
        n = self.versions.get(key, 0) + 1
        self.versions[key] = n
        return f"{key}#{n}"

    def define(self, key: str, expr: SExpr, guard: SExpr, type_: str = INT) -> SName:
        name = self.fresh(key)
        self.steps.append(Equation(name, expr, guard))
        self.types[name] = type_
        return SName(name)

    def atom(self, expr: SExpr, guard: SExpr) -> SExpr:
        if isinstance(expr, (SName, SConst)):
            return expr
        return self.define("$t", expr, guard)

    def gate_open(self) -> Optional[SExpr]:
        result = None
        for flag in self.program.assert_gate:
            test = SBinary("!=", self.env[flag], SConst(0))
            result = test if result is None else SBinary("&&", result, test)
        return result

    def check(self, guard: SExpr, cond: SExpr, kind: str):
        root = self.program.root_id(self.stmt_id)
        gate = self.gate_open()
        self.asserts += 1
        if gate is None:
            self.steps.append(AssertStep(self.asserts, guard, cond, root, kind))
            return
        self.steps.append(AssertStep(self.asserts, guard, SBinary("||", SUnary("!", gate), cond), root, kind))
        self.steps.append(AssumeStep(guard, cond, root))

    def index(self, array: str, index: Expr, guard: SExpr) -> SExpr:
        iv = self.expr(index, guard)
        size = self.sizes[array]
        in_bounds = SBinary("&&", SBinary("<=", SConst(0), iv), SBinary("<", iv, SConst(size)))
        self.check(guard, in_bounds, "bounds")
        return self.atom(iv, guard)

    def expr(self, e: Expr, guard: SExpr) -> SExpr:
        match e:
            case IntLit(value):
                return SConst(wrap(value, self.width))
            case BoolLit(value):
                return SConst(value)
            case Var(name):
                return self.env[name]
            case Index(array, index):
                iv = self.index(array, index, guard)
                elements = tuple(self.env[f"{array}[{j}]"] for j in range(self.sizes[array]))
                return SRead(array, elements, iv)
            case Unary(op, operand):
                return SUnary(op, self.expr(operand, guard))
            case Binary("&&", left, right):
                lv = self.expr(left, guard)
                return SBinary("&&", lv, self.expr(right, conj(guard, lv)))
            case Binary("||", left, right):
                lv = self.expr(left, guard)
                return SBinary("||", lv, self.expr(right, conj(guard, SUnary("!", lv))))
            case Binary(op, left, right) if op in ("/", "%"):
                lv = self.expr(left, guard)
                rv = self.expr(right, guard)
                self.check(guard, SBinary("!=", rv, SConst(0)), "division")
                return SBinary(op, lv, rv)
            case Binary(op, left, right):
                return SBinary(op, self.expr(left, guard), self.expr(right, guard))
        raise NotImplementedError(f"SSA for {type(e)} is not implemented!")

    def block(self, body: tuple[Stmt, ...], guard: SExpr):
        for stmt in body:
            self.stmt(stmt, guard)

    def stmt(self, s: Stmt, guard: SExpr):
        self.stmt_id = s.id
        match s:
            case Decl(name, init):
                value = SConst(0) if init is None else self.expr(init, guard)
                self.env[name] = self.define(name, value, guard)
            case Assign(Var(name), value):
                self.env[name] = self.define(name, self.expr(value, guard), guard)
            case Assign(Index(array, index), value):
                iv = self.index(array, index, guard)
                v = self.atom(self.expr(value, guard), guard)
                for j in range(self.sizes[array]):
                    key = f"{array}[{j}]"
                    if isinstance(iv, SConst):
                        if iv.value == j:
                            self.env[key] = self.define(key, v, guard)
                        continue
                    hit = SBinary("==", iv, SConst(j))
                    self.env[key] = self.define(key, SSelect(hit, v, self.env[key]), guard)
            case Havoc(target):
                name = self.fresh(target)
                self.steps.append(Nondet(name, self.program.root_id(s.id), guard))
                self.types[name] = INT
                self.env[target] = SName(name)
            case If(cond, then, orelse):
                cv = self.expr(cond, guard)
                then_guard = self.define("$g", conj(guard, cv), guard, BOOL)
                else_guard = self.define("$g", conj(guard, SUnary("!", cv)), guard, BOOL)
                before = dict(self.env)
                self.block(then, then_guard)
                after_then = self.env
                self.env = dict(before)
                self.block(orelse, else_guard)
                after_else = self.env
                self.env = {}
                for key in after_then.keys() | after_else.keys():
                    tv, ev = after_then.get(key), after_else.get(key)
                    if tv is None or ev is None or tv == ev:
                        self.env[key] = tv if ev is None else ev
                    else:
                        self.env[key] = self.define(key, SPhi(then_guard, tv, else_guard, ev), guard)
            case Assert(cond):
                self.check(guard, self.expr(cond, guard), "assert")
            case Assume(cond):
                cv = self.expr(cond, guard)
                self.steps.append(AssumeStep(guard, cv, self.program.root_id(s.id)))
            case Log():
                pass
            case _:
                raise ValueError(f"to_ssa expects a loop-free, inlined program, found {type(s).__name__}")


def to_ssa(p: Program, width: int, unwind_bound: Optional[int] = None) -> SsaProgram:
    """Convert the entry function of a loop-free, inlined program to SSA."""
    check_width(width)
    builder = SsaBuilder(p, width)
    builder.block(p.entry_function.body, TRUE)
    ssa = SsaProgram(tuple(builder.steps), width, builder.types, unwind_bound)
    logger.debug("SSA: %d steps, %d equations, %d asserts, %d nondets",
                 len(ssa.steps), len(ssa.defs), len(ssa.asserts), len(ssa.nondets))
    return ssa


def dump_ssa(s: SsaProgram) -> str:
    """Text form: equations, then ASSUME lines, then ASSERT lines"""
    lines = []
    for step in s.steps:
        match step:
            case Equation(name, expr, guard):
                lines.append(f"{name} := {expr} [{guard}]")
            case Nondet(name, _, guard):
                lines.append(f"{name} := havoc() [{guard}]")
    for step in s.assumes:
        cond = step.cond if step.guard == TRUE else f"({step.guard}) -> ({step.cond})"
        lines.append(f"ASSUME {cond}")
    for step in s.asserts:
        cond = step.cond if step.guard == TRUE else f"({step.guard}) -> ({step.cond})"
        lines.append(f"ASSERT {step.aid} {cond}")
    return "\n".join(lines) + "\n"
