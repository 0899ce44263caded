"""CNF container and the DIMACS exchange format."""

from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Optional, TextIO

from swarm_bmc.errors import DimacsError

type Clause = list[int]


@dataclass
class CnfFormula:
    num_vars: int = 0
    clauses: list[Clause] = field(default_factory=list)

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, clause: Iterable[int]):
        self.clauses.append(list(clause))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def __str__(self):
        return " /\\ ".join("(" + " \\/ ".join(str(lit) for lit in c) + ")" for c in self.clauses)


def dimacs_text(cnf: CnfFormula, comments: Iterable[str] = ()) -> str:
    lines = [f"c {line}" if line else "c" for line in comments]
    lines.append(f"p cnf {cnf.num_vars} {cnf.num_clauses}")
    lines.extend(" ".join(str(lit) for lit in (*clause, 0)) for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def write_dimacs(cnf: CnfFormula, sink: BinaryIO | TextIO, comments: Iterable[str] = ()):
    text = dimacs_text(cnf, comments)
    try:
        sink.write(text)
    except TypeError:
        sink.write(text.encode("ascii"))


def parse_dimacs(text: str) -> CnfFormula:
    header: Optional[tuple[int, int]] = None
    clauses: list[Clause] = []
    current: Clause = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DimacsError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed problem line {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"malformed problem line {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError("negative counts in problem line", lineno)
            continue
        if header is None:
            raise DimacsError("clause before the problem line", lineno)
        for word in line.split():
            try:
                lit = int(word)
            except ValueError:
                raise DimacsError(f"invalid literal {word!r}", lineno) from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > header[0]:
                raise DimacsError(f"literal {lit} exceeds the declared {header[0]} variables", lineno)
            else:
                current.append(lit)
    if header is None:
        raise DimacsError("missing problem line", 1)
    if current:
        clauses.append(current)
    if len(clauses) != header[1]:
        raise DimacsError(f"expected {header[1]} clauses, found {len(clauses)}", len(text.splitlines()))
    return CnfFormula(header[0], clauses)
