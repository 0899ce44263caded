"""Abstract syntax of the mini-language.

Nodes are frozen dataclasses; statement ids are excluded from equality so two
programs compare equal when they have the same structure.
"""

from dataclasses import dataclass, field
from typing import Mapping, Optional

from swarm_bmc.semantics import apply_binary


@dataclass(frozen=True)
class Expr:
    pass


def _operand(e: Expr) -> str:
    if isinstance(e, Binary):
        return f"({e})"
    return str(e)


@dataclass(frozen=True)
class IntLit(Expr):
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Index(Expr):
    array: str
    index: Expr

    def __str__(self):
        return f"{self.array}[{self.index}]"


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    operand: Expr

    def __str__(self):
        inner = _operand(self.operand)
        if isinstance(self.operand, Unary) or (isinstance(self.operand, IntLit) and self.operand.value < 0):
            inner = f"({inner})"
        return f"{self.op}{inner}"


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def __str__(self):
        return f"{_operand(self.left)} {self.op} {_operand(self.right)}"


@dataclass(frozen=True)
class Stmt:
    id: int = field(default=-1, compare=False, kw_only=True)


type Block = tuple[Stmt, ...]


@dataclass(frozen=True)
class Decl(Stmt):
    name: str
    init: Optional[Expr] = None


@dataclass(frozen=True)
class Assign(Stmt):
    target: Var | Index
    value: Expr


@dataclass(frozen=True)
class If(Stmt):
    cond: Expr
    then: Block
    orelse: Block = ()


@dataclass(frozen=True)
class While(Stmt):
    cond: Expr
    body: Block


@dataclass(frozen=True)
class For(Stmt):
    init: Optional[Stmt]
    cond: Expr
    step: Optional[Stmt]
    body: Block


@dataclass(frozen=True)
class Call(Stmt):
    func: str
    args: tuple[Expr, ...]
    target: Optional[str] = None


@dataclass(frozen=True)
class Return(Stmt):
    value: Optional[Expr] = None


@dataclass(frozen=True)
class Assert(Stmt):
    cond: Expr


@dataclass(frozen=True)
class Assume(Stmt):
    cond: Expr


@dataclass(frozen=True)
class Log(Stmt):
    label: str


@dataclass(frozen=True)
class Havoc(Stmt):
    target: str


@dataclass(frozen=True)
class VarDecl:
    name: str
    size: Optional[Expr] = None
    init: Optional[Expr] = None
    id: int = field(default=-1, compare=False, kw_only=True)

    @property
    def is_array(self) -> bool:
        return self.size is not None


@dataclass(frozen=True)
class FunctionDef:
    name: str
    params: tuple[str, ...]
    body: Block
    id: int = field(default=-1, compare=False, kw_only=True)


@dataclass(frozen=True)
class SourceLocation:
    file: str
    line: int
    column: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


def const_value(e: Optional[Expr]) -> Optional[int]:
    """Fold an expression built only from literals, or return None."""
    match e:
        case IntLit(value):
            return value
        case Unary("-", operand):
            inner = const_value(operand)
            return None if inner is None else -inner
        case Binary(op, left, right) if op in ("+", "-", "*"):
            lv, rv = const_value(left), const_value(right)
            if lv is None or rv is None:
                return None
            return apply_binary(op, lv, rv, 128)
    return None


@dataclass(frozen=True)
class Program:
    functions: tuple[FunctionDef, ...]
    globals: tuple[VarDecl, ...] = ()
    entry: str = "main"
    source_map: Mapping[int, SourceLocation] = field(default_factory=dict, compare=False)
    constants: Mapping[str, int] = field(default_factory=dict)
    # derived statement id -> id of the statement it was copied from
    origins: Mapping[int, int] = field(default_factory=dict, compare=False)
    # global flags that must all be non-zero before a failing check counts as a violation
    assert_gate: tuple[str, ...] = ()
    path: str = field(default="<input>", compare=False)

    def function(self, name: str) -> Optional[FunctionDef]:
        for f in self.functions:
            if f.name == name:
                return f
        return None

    @property
    def entry_function(self) -> FunctionDef:
        f = self.function(self.entry)
        if f is None:
            raise KeyError(f"entry function {self.entry!r} is missing")
        return f

    def global_decl(self, name: str) -> Optional[VarDecl]:
        for g in self.globals:
            if g.name == name:
                return g
        return None

    def array_sizes(self) -> dict[str, int]:
        sizes = {}
        for g in self.globals:
            if g.is_array:
                size = const_value(g.size)
                if size is not None:
                    sizes[g.name] = size
        return sizes

    def root_id(self, stmt_id: int) -> int:
        seen = set()
        while stmt_id in self.origins and stmt_id not in seen:
            seen.add(stmt_id)
            stmt_id = self.origins[stmt_id]
        return stmt_id

    def location(self, stmt_id: int) -> SourceLocation:
        loc = self.source_map.get(stmt_id)
        if loc is None:
            loc = self.source_map.get(self.root_id(stmt_id))
        return loc if loc is not None else SourceLocation(self.path, 0, 0)

    @property
    def next_id(self) -> int:
        return max((*self.source_map, *self.origins), default=0) + 1
