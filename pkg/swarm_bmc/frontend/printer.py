"""Pretty-printer whose output parses back to the same Program."""

from swarm_bmc.frontend.syntax import (
    Assert, Assign, Assume, Call, Decl, For, FunctionDef, Havoc, If, Log, Program, Return, Stmt,
    VarDecl, While,
)

INDENT = "    "


def pretty_print(program: Program) -> str:
    lines: list[str] = []
    for name, value in program.constants.items():
        lines.append(f"const {name} = {value};")
    if program.assert_gate:
        lines.append(f"gate {', '.join(program.assert_gate)};")
    for decl in program.globals:
        lines.append(trans_global(decl))
    for func in program.functions:
        if lines:
            lines.append("")
        lines.extend(trans_function(func))
    return "\n".join(lines) + "\n"


def trans_global(decl: VarDecl) -> str:
    if decl.size is not None:
        return f"int {decl.name}[{decl.size}];"
    if decl.init is not None:
        return f"int {decl.name} = {decl.init};"
    return f"int {decl.name};"


def trans_function(func: FunctionDef) -> list[str]:
    params = ", ".join(f"int {p}" for p in func.params)
    return [f"func {func.name}({params}) {{", *trans_block(func.body, 1), "}"]


def trans_block(body: tuple[Stmt, ...], depth: int) -> list[str]:
    lines = []
    for stmt in body:
        lines.extend(trans_stmt(stmt, depth))
    return lines


def trans_simple(stmt: Stmt) -> str:
    """A statement without indentation or trailing ';' (used in for headers)"""
    match stmt:
        case Decl(name, None):
            return f"int {name}"
        case Decl(name, init):
            return f"int {name} = {init}"
        case Assign(target, value):
            return f"{target} = {value}"
    raise ValueError(f"{type(stmt).__name__} is not a simple statement")


def quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def trans_stmt(stmt: Stmt, depth: int) -> list[str]:
    pad = INDENT * depth
    match stmt:
        case Decl() | Assign():
            return [f"{pad}{trans_simple(stmt)};"]
        case Havoc(target):
            return [f"{pad}{target} = havoc();"]
        case Call(func, args, target):
            call = f"{func}({', '.join(str(a) for a in args)})"
            return [f"{pad}{target} = {call};" if target is not None else f"{pad}{call};"]
        case Return(None):
            return [f"{pad}return;"]
        case Return(value):
            return [f"{pad}return {value};"]
        case Assert(cond):
            return [f"{pad}assert({cond});"]
        case Assume(cond):
            return [f"{pad}assume({cond});"]
        case Log(label):
            return [f"{pad}log({quote(label)});"]
        case If(cond, then, orelse):
            lines = [f"{pad}if ({cond}) {{", *trans_block(then, depth + 1)]
            if len(orelse) == 1 and isinstance(orelse[0], If):
                chained = trans_stmt(orelse[0], depth)
                lines.append(f"{pad}}} else {chained[0].lstrip()}")
                lines.extend(chained[1:])
                return lines
            if orelse:
                lines.append(f"{pad}}} else {{")
                lines.extend(trans_block(orelse, depth + 1))
            lines.append(f"{pad}}}")
            return lines
        case While(cond, body):
            return [f"{pad}while ({cond}) {{", *trans_block(body, depth + 1), f"{pad}}}"]
        case For(init, cond, step, body):
            init_s = trans_simple(init) if init is not None else ""
            step_s = trans_simple(step) if step is not None else ""
            return [f"{pad}for ({init_s}; {cond}; {step_s}) {{", *trans_block(body, depth + 1), f"{pad}}}"]
    raise NotImplementedError(f"printing for {type(stmt)} is not implemented!")
