"""Bit-blasting of an SsaProgram into CNF.

Each integer name becomes `width` literals (least significant first), each
boolean name one literal. Assertion a gets a selector literal that is true iff
a is reached under its guard, every earlier assumption held and its condition
is false; the formula additionally requires one selector to be true.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import BinaryIO, Optional, TextIO

from swarm_bmc.encode.circuit import FALSE, TRUE, CircuitBuilder, Word
from swarm_bmc.encode.cnf import CnfFormula, write_dimacs
from swarm_bmc.semantics import to_unsigned
from swarm_bmc.transform.ssa import (
    AssertStep, AssumeStep, Equation, Nondet, SBinary, SConst, SExpr, SName, SPhi, SRead, SSelect,
    SUnary, SsaProgram, check_width,
)

logger = logging.getLogger(__name__)

type Value = Word | int


@dataclass(frozen=True)
class EncodeStats:
    num_vars: int
    num_clauses: int
    sliced: bool = False
    encode_ms: float = 0.0

    def __str__(self):
        return f"vars={self.num_vars} clauses={self.num_clauses} sliced={str(self.sliced).lower()}"


@dataclass
class EncodedInstance:
    cnf: CnfFormula
    var_map: dict[str, list[int]]
    assert_selectors: dict[int, int]
    stats: EncodeStats
    width: int
    # assert id -> source statement id, for DIMACS comments and reports
    assert_sources: dict[int, int] = field(default_factory=dict)
    nondet_names: list[str] = field(default_factory=list)


class BitBlaster:
    def __init__(self, width: int, builder: Optional[CircuitBuilder] = None):
        self.width = width
        self.builder = builder or CircuitBuilder()
        self.values: dict[str, Value] = {}
        self.cache: dict[SExpr, Value] = {}

    def fresh_word(self, name: str) -> Word:
        bits = self.builder.word(self.width)
        self.values[name] = bits
        return bits

    def word(self, e: SExpr) -> Word:
        value = self.blast(e)
        if isinstance(value, int):
            raise TypeError(f"expected an integer expression, got boolean {e}")
        return value

    def bit(self, e: SExpr) -> int:
        value = self.blast(e)
        if not isinstance(value, int):
            raise TypeError(f"expected a boolean expression, got integer {e}")
        return value

    def blast(self, e: SExpr) -> Value:
        if isinstance(e, SName):
            return self.values[e.name]
        cached = self.cache.get(e)
        if cached is None:
            cached = self.blast0(e)
            self.cache[e] = cached
        return cached

    def blast0(self, e: SExpr) -> Value:
        b = self.builder
        match e:
            case SConst(bool() as value):
                return b.const(value)
            case SConst(value):
                return b.const_word(to_unsigned(value, self.width), self.width)
            case SUnary("-", operand):
                return b.neg(self.word(operand))
            case SUnary("!", operand):
                return -self.bit(operand)
            case SBinary("&&", left, right):
                return b.and2(self.bit(left), self.bit(right))
            case SBinary("||", left, right):
                return b.or2(self.bit(left), self.bit(right))
            case SBinary(op, left, right):
                return self.binary(op, self.word(left), self.word(right))
            case SSelect(cond, then, orelse) | SPhi(cond, then, _, orelse):
                s = self.bit(cond)
                t, f = self.blast(then), self.blast(orelse)
                if isinstance(t, int):
                    return b.mux(s, t, f)
                return b.mux_word(s, t, f)
            case SRead(_, elements, index):
                idx = self.word(index)
                result = self.word(elements[0])
                for j in range(1, len(elements)):
                    hit = b.eq(idx, b.const_word(j, self.width))
                    result = b.mux_word(hit, self.word(elements[j]), result)
                return result
        raise NotImplementedError(f"bit-blasting for {e} is not implemented!")

    def binary(self, op: str, a: Word, c: Word) -> Value:
        b = self.builder
        match op:
            case "+":
                return b.add(a, c)
            case "-":
                return b.sub(a, c)
            case "*":
                return b.mul(a, c)
            case "/":
                return b.sdivmod(a, c)[0]
            case "%":
                return b.sdivmod(a, c)[1]
            case "<":
                return b.slt(a, c)
            case "<=":
                return -b.slt(c, a)
            case ">":
                return b.slt(c, a)
            case ">=":
                return -b.slt(a, c)
            case "==":
                return b.eq(a, c)
            case "!=":
                return -b.eq(a, c)
        raise NotImplementedError(f"bit-blasting for operator {op} is not implemented!")


def literals(value: Value) -> list[int]:
    return [value] if isinstance(value, int) else list(value)


def encode(s: SsaProgram, width: Optional[int] = None, sliced: bool = False) -> EncodedInstance:
    """Encode the assertion-violation query of an SsaProgram."""
    width = s.width if width is None else width
    check_width(width)
    start = time.perf_counter()
    blaster = BitBlaster(width)
    b = blaster.builder
    var_map: dict[str, list[int]] = {}
    selectors: dict[int, int] = {}
    sources: dict[int, int] = {}
    nondet_names: list[str] = []
    assumed = TRUE
    for step in s.steps:
        match step:
            case Nondet(name):
                var_map[name] = blaster.fresh_word(name)
                nondet_names.append(name)
            case Equation(name, expr):
                value = blaster.blast(expr)
                blaster.values[name] = value
                var_map[name] = literals(value)
            case AssumeStep(guard, cond):
                assumed = b.and2(assumed, b.or2(-blaster.bit(guard), blaster.bit(cond)))
            case AssertStep(aid, guard, cond, stmt_id):
                selectors[aid] = b.and_all((blaster.bit(guard), assumed, -blaster.bit(cond)))
                sources[aid] = stmt_id
    b.cnf.add(sorted({lit for lit in selectors.values() if lit != FALSE}))
    elapsed = (time.perf_counter() - start) * 1000
    stats = EncodeStats(b.cnf.num_vars, b.cnf.num_clauses, sliced, elapsed)
    logger.debug("encoded %d steps: %s in %.1f ms", len(s.steps), stats, elapsed)
    return EncodedInstance(b.cnf, var_map, selectors, stats, width, sources, nondet_names)


def export_dimacs(e: EncodedInstance, sink: BinaryIO | TextIO):
    """Write the instance as DIMACS with a comment block naming selectors and nondets."""
    comments = [f"swarm-bmc instance width={e.width} {e.stats}"]
    for aid, lit in sorted(e.assert_selectors.items()):
        comments.append(f"assert {aid} stmt {e.assert_sources.get(aid, -1)} selector {lit}")
    for name in e.nondet_names:
        comments.append(f"nondet {name} " + " ".join(str(lit) for lit in e.var_map[name]))
    write_dimacs(e.cnf, sink, comments)
