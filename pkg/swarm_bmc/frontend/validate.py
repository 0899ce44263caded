"""Static checks: scoping, strict int/bool typing, call graph and declarations."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from swarm_bmc.frontend.syntax import (
    Assert, Assign, Assume, Binary, BoolLit, Call, Decl, Expr, For, FunctionDef, Havoc, If, Index,
    IntLit, Log, Program, Return, Stmt, Unary, Var, While, const_value,
)
from swarm_bmc.semantics import ARITHMETIC_OPS, COMPARISON_OPS, LOGICAL_OPS

logger = logging.getLogger(__name__)


class SemanticErrorKind(Enum):
    UNDECLARED = "undeclared name"
    REDECLARED = "redeclared name"
    TYPE_MISMATCH = "type mismatch"
    RECURSION = "recursion"
    NON_CONST_ARRAY_SIZE = "non-constant array size"
    NON_CONST_INITIALIZER = "non-constant global initialiser"
    BAD_ENTRY = "bad entry function"
    DUPLICATE_FUNCTION = "duplicate function"
    UNKNOWN_FUNCTION = "unknown function"
    ARITY = "wrong number of arguments"
    NOT_AN_ARRAY = "not an array"
    NOT_A_SCALAR = "not a scalar"
    MISSING_RETURN_VALUE = "missing return value"


@dataclass(frozen=True)
class SemanticError:
    kind: SemanticErrorKind
    stmt_id: int
    message: str

    def __str__(self):
        return f"{self.kind.value}: {self.message} (statement {self.stmt_id})"


INT = "int"
BOOL = "bool"


class Checker:
    def __init__(self, program: Program):
        self.program = program
        self.errors: list[SemanticError] = []
        self.arrays: dict[str, int] = {}
        self.global_scalars: set[str] = set()
        self.functions: dict[str, FunctionDef] = {}

    def report(self, kind: SemanticErrorKind, stmt_id: int, message: str):
        self.errors.append(SemanticError(kind, stmt_id, message))

    def run(self) -> list[SemanticError]:
        self.check_globals()
        for func in self.program.functions:
            if func.name in self.functions:
                self.report(SemanticErrorKind.DUPLICATE_FUNCTION, func.id, f"function '{func.name}' defined twice")
            else:
                self.functions[func.name] = func
        entry = self.functions.get(self.program.entry)
        if entry is None:
            self.report(SemanticErrorKind.BAD_ENTRY, -1, f"no entry function '{self.program.entry}'")
        elif entry.params:
            self.report(SemanticErrorKind.BAD_ENTRY, entry.id, f"'{entry.name}' must take no parameters")
        for flag in self.program.assert_gate:
            if flag not in self.global_scalars:
                self.report(SemanticErrorKind.UNDECLARED, -1, f"gate flag '{flag}' is not a global scalar")
        for func in self.functions.values():
            self.check_function(func)
        self.check_recursion()
        return self.errors

    def check_globals(self):
        for decl in self.program.globals:
            if decl.name in self.arrays or decl.name in self.global_scalars:
                self.report(SemanticErrorKind.REDECLARED, decl.id, f"global '{decl.name}' declared twice")
                continue
            if decl.is_array:
                size = const_value(decl.size)
                if size is None:
                    self.report(SemanticErrorKind.NON_CONST_ARRAY_SIZE, decl.id,
                                f"size of '{decl.name}' is not a constant")
                elif size <= 0:
                    self.report(SemanticErrorKind.NON_CONST_ARRAY_SIZE, decl.id,
                                f"size of '{decl.name}' must be positive, got {size}")
                self.arrays[decl.name] = size or 0
            else:
                if decl.init is not None and const_value(decl.init) is None:
                    self.report(SemanticErrorKind.NON_CONST_INITIALIZER, decl.id,
                                f"initialiser of '{decl.name}' is not a constant")
                self.global_scalars.add(decl.name)

    def check_function(self, func: FunctionDef):
        scope: list[set[str]] = [set()]
        for param in func.params:
            if self.visible(param, scope) or param in self.arrays:
                self.report(SemanticErrorKind.REDECLARED, func.id, f"parameter '{param}' shadows another name")
            scope[-1].add(param)
        self.check_block(func.body, scope)

    def visible(self, name: str, scope: list[set[str]]) -> bool:
        return name in self.global_scalars or any(name in s for s in scope)

    def check_block(self, body: tuple[Stmt, ...], scope: list[set[str]]):
        scope.append(set())
        for stmt in body:
            self.check_stmt(stmt, scope)
        scope.pop()

    def declare(self, name: str, stmt_id: int, scope: list[set[str]]):
        if self.visible(name, scope) or name in self.arrays or name in self.functions:
            self.report(SemanticErrorKind.REDECLARED, stmt_id, f"'{name}' is already declared")
        scope[-1].add(name)

    def check_scalar_target(self, name: str, stmt_id: int, scope: list[set[str]]):
        if name in self.arrays:
            self.report(SemanticErrorKind.NOT_A_SCALAR, stmt_id, f"array '{name}' used as a scalar")
        elif not self.visible(name, scope):
            self.report(SemanticErrorKind.UNDECLARED, stmt_id, f"'{name}' is not declared")

    def expect_type(self, e: Expr, expected: str, stmt_id: int, scope: list[set[str]]):
        actual = self.type_of(e, stmt_id, scope)
        if actual is not None and actual != expected:
            self.report(SemanticErrorKind.TYPE_MISMATCH, stmt_id, f"'{e}' is {actual}, expected {expected}")

    def check_stmt(self, stmt: Stmt, scope: list[set[str]]):
        match stmt:
            case Decl(name, init):
                if init is not None:
                    self.expect_type(init, INT, stmt.id, scope)
                self.declare(name, stmt.id, scope)
            case Assign(Var(name), value):
                self.check_scalar_target(name, stmt.id, scope)
                self.expect_type(value, INT, stmt.id, scope)
            case Assign(Index(array, index), value):
                if array not in self.arrays:
                    self.report(SemanticErrorKind.NOT_AN_ARRAY, stmt.id, f"'{array}' is not an array")
                self.expect_type(index, INT, stmt.id, scope)
                self.expect_type(value, INT, stmt.id, scope)
            case Havoc(target):
                self.check_scalar_target(target, stmt.id, scope)
            case If(cond, then, orelse):
                self.expect_type(cond, BOOL, stmt.id, scope)
                self.check_block(then, scope)
                self.check_block(orelse, scope)
            case While(cond, body):
                self.expect_type(cond, BOOL, stmt.id, scope)
                self.check_block(body, scope)
            case For(init, cond, step, body):
                scope.append(set())
                if init is not None:
                    self.check_stmt(init, scope)
                self.expect_type(cond, BOOL, stmt.id, scope)
                if step is not None:
                    self.check_stmt(step, scope)
                self.check_block(body, scope)
                scope.pop()
            case Call(func, args, target):
                self.check_call(stmt, func, args, target, scope)
            case Return(value):
                if value is not None:
                    self.expect_type(value, INT, stmt.id, scope)
            case Assert(cond) | Assume(cond):
                self.expect_type(cond, BOOL, stmt.id, scope)
            case Log():
                pass
            case _:
                raise NotImplementedError(f"validation for {type(stmt)} is not implemented!")

    def check_call(self, stmt: Call, func: str, args, target: Optional[str], scope):
        callee = self.functions.get(func)
        for arg in args:
            self.expect_type(arg, INT, stmt.id, scope)
        if target is not None:
            self.check_scalar_target(target, stmt.id, scope)
        if callee is None:
            self.report(SemanticErrorKind.UNKNOWN_FUNCTION, stmt.id, f"call to unknown function '{func}'")
            return
        if len(args) != len(callee.params):
            self.report(SemanticErrorKind.ARITY, stmt.id,
                        f"'{func}' takes {len(callee.params)} argument(s), got {len(args)}")
        if target is not None and not returns_value(callee.body):
            self.report(SemanticErrorKind.MISSING_RETURN_VALUE, stmt.id, f"'{func}' never returns a value")
        if func == self.program.entry:
            self.report(SemanticErrorKind.RECURSION, stmt.id, f"entry function '{func}' cannot be called")

    def type_of(self, e: Expr, stmt_id: int, scope) -> Optional[str]:
        """Type of e, or None once an error has been reported inside it"""
        match e:
            case IntLit():
                return INT
            case BoolLit():
                return BOOL
            case Var(name):
                if name in self.arrays:
                    self.report(SemanticErrorKind.NOT_A_SCALAR, stmt_id, f"array '{name}' used as a scalar")
                    return None
                if not self.visible(name, scope):
                    self.report(SemanticErrorKind.UNDECLARED, stmt_id, f"'{name}' is not declared")
                    return None
                return INT
            case Index(array, index):
                self.expect_type(index, INT, stmt_id, scope)
                if array not in self.arrays:
                    self.report(SemanticErrorKind.NOT_AN_ARRAY, stmt_id, f"'{array}' is not an array")
                    return None
                return INT
            case Unary(op, operand):
                expected = INT if op == "-" else BOOL
                self.expect_type(operand, expected, stmt_id, scope)
                return expected
            case Binary(op, left, right):
                if op in LOGICAL_OPS:
                    self.expect_type(left, BOOL, stmt_id, scope)
                    self.expect_type(right, BOOL, stmt_id, scope)
                    return BOOL
                self.expect_type(left, INT, stmt_id, scope)
                self.expect_type(right, INT, stmt_id, scope)
                if op in COMPARISON_OPS:
                    return BOOL
                if op in ARITHMETIC_OPS:
                    return INT
        raise NotImplementedError(f"typing for {e!r} is not implemented!")

    def check_recursion(self):
        graph = {name: sorted(set(callees(f.body))) for name, f in self.functions.items()}
        state: dict[str, int] = {}
        reported: set[str] = set()

        def visit(name: str, stack: list[str]):
            state[name] = 1
            stack.append(name)
            for callee in graph.get(name, []):
                if callee not in graph:
                    continue
                if state.get(callee) == 1:
                    cycle = stack[stack.index(callee):]
                    for member in cycle:
                        if member not in reported:
                            reported.add(member)
                            path = " -> ".join(cycle + [callee])
                            self.report(SemanticErrorKind.RECURSION, self.functions[member].id,
                                        f"'{member}' is recursive ({path})")
                elif callee not in state:
                    visit(callee, stack)
            stack.pop()
            state[name] = 2

        for name in graph:
            if name not in state:
                visit(name, [])


def callees(body: tuple[Stmt, ...]):
    for stmt in body:
        match stmt:
            case Call(func):
                yield func
            case If(_, then, orelse):
                yield from callees(then)
                yield from callees(orelse)
            case While(_, inner) | For(body=inner):
                yield from callees(inner)


def returns_value(body: tuple[Stmt, ...]) -> bool:
    for stmt in body:
        match stmt:
            case Return(value) if value is not None:
                return True
            case If(_, then, orelse):
                if returns_value(then) or returns_value(orelse):
                    return True
            case While(_, inner) | For(body=inner):
                if returns_value(inner):
                    return True
    return False


def validate(program: Program) -> list[SemanticError]:
    """Return every semantic error of the program; an empty list means it is well formed."""
    errors = Checker(program).run()
    if errors:
        logger.debug("validation found %d error(s)", len(errors))
    return errors
