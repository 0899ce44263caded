"""Concrete big-step interpreter of the mini-language.

Havoc reads the next value of a NondetTape. Every executed statement and every
loop iteration costs one step. A failing check (assert, array bounds, division
by zero) ends the run with an assertion violation reported at the root id of
the checking statement, the same id the SSA instrumentation records; while the
program's assertion gate is closed a failing check blocks the run instead.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from swarm_bmc.config import DEFAULT_STEP_LIMIT, DEFAULT_WIDTH
from swarm_bmc.frontend.syntax import (
    Assert, Assign, Assume, Binary, BoolLit, Call, Decl, Expr, For, Havoc, If, Index, IntLit, Log, Program,
    Return, Stmt, Unary, Var, While, const_value,
)
from swarm_bmc.semantics import apply_binary, apply_unary, wrap
from swarm_bmc.transform.ssa import check_width

logger = logging.getLogger(__name__)


@dataclass(frozen=True, init=False)
class NondetTape:
    """Havoc values in consumption order, wrapped to the signed range of the width"""
    values: tuple[int, ...]

    def __init__(self, values: Iterable[int] = (), width: Optional[int] = None):
        values = tuple(values)
        if width is not None:
            values = tuple(wrap(v, width) for v in values)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __str__(self):
        return "[" + ", ".join(str(v) for v in self.values) + "]"


class OutcomeKind(Enum):
    COMPLETED = "completed"
    ASSERTION_VIOLATION = "assertion_violation"
    ASSUME_BLOCKED = "assume_blocked"
    TAPE_EXHAUSTED = "tape_exhausted"
    STEP_LIMIT = "step_limit"


@dataclass(frozen=True)
class TraceStep:
    """Post-state of the variables a statement wrote"""
    stmt_id: int
    line: int
    values: dict[str, int]


@dataclass(frozen=True)
class ExecutionOutcome:
    kind: OutcomeKind
    stmt_id: Optional[int] = None
    step_index: Optional[int] = None
    log: tuple[str, ...] = ()
    steps: int = 0
    consumed: int = 0
    trace: tuple[TraceStep, ...] = field(default=(), compare=False)
    # havoc target that found the tape empty
    variable: Optional[str] = None

    @property
    def violated(self) -> bool:
        return self.kind is OutcomeKind.ASSERTION_VIOLATION

    def __str__(self):
        match self.kind:
            case OutcomeKind.ASSERTION_VIOLATION:
                return f"assertion violation at statement {self.stmt_id} (step {self.step_index})"
            case OutcomeKind.ASSUME_BLOCKED:
                return f"blocked by assumption at statement {self.stmt_id}"
            case OutcomeKind.TAPE_EXHAUSTED:
                return f"tape exhausted at havoc of {self.variable}"
            case OutcomeKind.STEP_LIMIT:
                return f"step limit reached after {self.steps} steps"
        return f"completed in {self.steps} steps"


class Stop(Exception):
    def __init__(self, kind: OutcomeKind, stmt_id: Optional[int] = None, variable: Optional[str] = None):
        self.kind = kind
        self.stmt_id = stmt_id
        self.variable = variable


class ReturnSignal(Exception):
    def __init__(self, value: Optional[int]):
        self.value = value


class Interpreter:
    def __init__(self, program: Program, tape: NondetTape, step_limit: int, width: int,
                 unwind: Optional[int] = None, record_trace: bool = False):
        self.program = program
        self.tape = tape.values
        self.position = 0
        self.step_limit = step_limit
        self.width = width
        self.unwind = unwind
        self.record_trace = record_trace
        self.steps = 0
        self.log: list[str] = []
        self.trace: list[TraceStep] = []
        self.globals: dict[str, int] = {}
        self.arrays: dict[str, list[int]] = {}
        self.stmt_id = -1
        for g in program.globals:
            if g.is_array:
                self.arrays[g.name] = [0] * program.array_sizes()[g.name]
            else:
                self.globals[g.name] = wrap(const_value(g.init) or 0, width)

    def tick(self):
        self.steps += 1
        if self.steps > self.step_limit:
            raise Stop(OutcomeKind.STEP_LIMIT, self.stmt_id)

    def gate_closed(self) -> bool:
        return any(self.globals[flag] == 0 for flag in self.program.assert_gate)

    def fail(self):
        root = self.program.root_id(self.stmt_id)
        if self.gate_closed():
            raise Stop(OutcomeKind.ASSUME_BLOCKED, root)
        raise Stop(OutcomeKind.ASSERTION_VIOLATION, root)

    def record(self, values: dict[str, int]):
        if self.record_trace:
            root = self.program.root_id(self.stmt_id)
            self.trace.append(TraceStep(root, self.program.location(root).line, values))

    # variables

    def read(self, frame: dict[str, int], name: str) -> int:
        if name in frame:
            return frame[name]
        return self.globals[name]

    def write(self, frame: dict[str, int], name: str, value: int):
        if name in frame or name not in self.globals:
            frame[name] = value
        else:
            self.globals[name] = value
        self.record({name: value})

    def element(self, array: str, index: int) -> int:
        if not 0 <= index < len(self.arrays[array]):
            self.fail()
        return index

    # expressions

    def eval_value(self, e: Expr, frame: dict[str, int]):
        match e:
            case IntLit(value):
                return wrap(value, self.width)
            case BoolLit(value):
                return value
            case Var(name):
                return self.read(frame, name)
            case Index(array, index):
                return self.arrays[array][self.element(array, self.eval_value(index, frame))]
            case Unary(op, operand):
                return apply_unary(op, self.eval_value(operand, frame), self.width)
            case Binary("&&", left, right):
                return bool(self.eval_value(left, frame)) and bool(self.eval_value(right, frame))
            case Binary("||", left, right):
                return bool(self.eval_value(left, frame)) or bool(self.eval_value(right, frame))
            case Binary(op, left, right):
                lv = self.eval_value(left, frame)
                rv = self.eval_value(right, frame)
                if op in ("/", "%") and rv == 0:
                    self.fail()
                return apply_binary(op, lv, rv, self.width)
        raise NotImplementedError(f"evaluation for {type(e)} is not implemented!")

    # statements

    def run_block(self, body: tuple[Stmt, ...], frame: dict[str, int]):
        for stmt in body:
            self.run(stmt, frame)

    def run(self, s: Stmt, frame: dict[str, int]):
        self.stmt_id = s.id
        self.tick()
        match s:
            case Decl(name, init):
                value = 0 if init is None else self.eval_value(init, frame)
                frame[name] = value
                self.record({name: value})
            case Assign(Var(name), value):
                self.write(frame, name, self.eval_value(value, frame))
            case Assign(Index(array, index), value):
                i = self.element(array, self.eval_value(index, frame))
                v = self.eval_value(value, frame)
                self.arrays[array][i] = v
                self.record({f"{array}[{i}]": v})
            case Havoc(target):
                if self.position >= len(self.tape):
                    raise Stop(OutcomeKind.TAPE_EXHAUSTED, self.program.root_id(s.id), target)
                value = wrap(self.tape[self.position], self.width)
                self.position += 1
                self.write(frame, target, value)
            case If(cond, then, orelse):
                self.run_block(then if self.eval_value(cond, frame) else orelse, frame)
            case While(cond, body):
                self.loop(s, cond, body, None, frame)
            case For(init, cond, step, body):
                if init is not None:
                    self.run(init, frame)
                self.loop(s, cond, body, step, frame)
            case Call(func, args, target):
                result = self.call(func, [self.eval_value(a, frame) for a in args])
                if target is not None:
                    self.stmt_id = s.id
                    self.write(frame, target, 0 if result is None else result)
            case Return(value):
                raise ReturnSignal(None if value is None else self.eval_value(value, frame))
            case Assert(cond):
                if not self.eval_value(cond, frame):
                    self.fail()
            case Assume(cond):
                if not self.eval_value(cond, frame):
                    raise Stop(OutcomeKind.ASSUME_BLOCKED, self.program.root_id(s.id))
            case Log(label):
                self.log.append(label)
            case _:
                raise NotImplementedError(f"execution of {type(s).__name__} is not implemented!")

    def loop(self, loop: Stmt, cond: Expr, body: tuple[Stmt, ...], step: Optional[Stmt], frame: dict[str, int]):
        iterations = 0
        while True:
            self.stmt_id = loop.id
            if not self.eval_value(cond, frame):
                return
            if self.unwind is not None and iterations >= self.unwind:
                raise Stop(OutcomeKind.ASSUME_BLOCKED, self.program.root_id(loop.id))
            iterations += 1
            self.tick()
            self.run_block(body, frame)
            if step is not None:
                self.run(step, frame)

    def call(self, name: str, args: list[int]) -> Optional[int]:
        func = self.program.function(name)
        frame = dict(zip(func.params, args))
        try:
            self.run_block(func.body, frame)
        except ReturnSignal as ret:
            return ret.value
        return None

    def execute(self) -> ExecutionOutcome:
        try:
            self.call(self.program.entry, [])
            kind, stmt_id, variable = OutcomeKind.COMPLETED, None, None
        except Stop as stop:
            kind, stmt_id, variable = stop.kind, stop.stmt_id, stop.variable
        step_index = self.steps if kind is OutcomeKind.ASSERTION_VIOLATION else None
        return ExecutionOutcome(kind, stmt_id, step_index, tuple(self.log), self.steps, self.position,
                                tuple(self.trace), variable)


def execute(p: Program, tape: NondetTape | Iterable[int] = (), step_limit: int = DEFAULT_STEP_LIMIT,
            width: int = DEFAULT_WIDTH, unwind: Optional[int] = None, record_trace: bool = False) -> ExecutionOutcome:
    """Run the entry function of p on the tape.

    With an unwind bound, an execution that would start iteration unwind + 1
    of any loop instance is blocked, mirroring the unwinding assumption.
    """
    check_width(width)
    if not isinstance(tape, NondetTape):
        tape = NondetTape(tape, width)
    outcome = Interpreter(p, tape, step_limit, width, unwind, record_trace).execute()
    logger.debug("executed %s on %d tape values: %s", p.entry, len(tape), outcome)
    return outcome
