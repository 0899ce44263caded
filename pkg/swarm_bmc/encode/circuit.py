"""Gate-level CNF construction (Tseitin) with constant folding and structural hashing.

Literals are DIMACS integers. Variable 1 is fixed to true by a unit clause, so
`TRUE == 1` and `FALSE == -1` can be used as ordinary literals.
"""

from typing import Sequence

from swarm_bmc.encode.cnf import CnfFormula

TRUE = 1
FALSE = -1

type Word = list[int]


class CircuitBuilder:
    def __init__(self, cnf: CnfFormula | None = None):
        self.cnf = cnf if cnf is not None else CnfFormula()
        if self.cnf.num_vars == 0:
            self.cnf.new_var()
            self.cnf.add([TRUE])
        self.and_cache: dict[tuple[int, ...], int] = {}
        self.xor_cache: dict[tuple[int, int], int] = {}
        self.mux_cache: dict[tuple[int, int, int], int] = {}

    def new(self) -> int:
        return self.cnf.new_var()

    def word(self, width: int) -> Word:
        return [self.new() for _ in range(width)]

    @staticmethod
    def const(value: bool) -> int:
        return TRUE if value else FALSE

    def const_word(self, value: int, width: int) -> Word:
        return [TRUE if (value >> i) & 1 else FALSE for i in range(width)]

    # single-bit gates

    def and_all(self, lits: Sequence[int]) -> int:
        inputs = set()
        for lit in lits:
            if lit == FALSE or -lit in inputs:
                return FALSE
            if lit != TRUE:
                inputs.add(lit)
        if not inputs:
            return TRUE
        if len(inputs) == 1:
            return next(iter(inputs))
        key = tuple(sorted(inputs))
        out = self.and_cache.get(key)
        if out is None:
            out = self.new()
            for lit in key:
                self.cnf.add([-out, lit])
            self.cnf.add([out, *(-lit for lit in key)])
            self.and_cache[key] = out
        return out

    def and2(self, a: int, b: int) -> int:
        return self.and_all((a, b))

    def or_all(self, lits: Sequence[int]) -> int:
        return -self.and_all([-lit for lit in lits])

    def or2(self, a: int, b: int) -> int:
        return -self.and_all((-a, -b))

    def xor2(self, a: int, b: int) -> int:
        if a in (TRUE, FALSE):
            return -b if a == TRUE else b
        if b in (TRUE, FALSE):
            return -a if b == TRUE else a
        if a == b:
            return FALSE
        if a == -b:
            return TRUE
        negate = (a < 0) != (b < 0)
        key = (min(abs(a), abs(b)), max(abs(a), abs(b)))
        out = self.xor_cache.get(key)
        if out is None:
            out = self.new()
            x, y = key
            self.cnf.add([-out, x, y])
            self.cnf.add([-out, -x, -y])
            self.cnf.add([out, -x, y])
            self.cnf.add([out, x, -y])
            self.xor_cache[key] = out
        return -out if negate else out

    def xnor2(self, a: int, b: int) -> int:
        return -self.xor2(a, b)

    def mux(self, s: int, t: int, e: int) -> int:
        """s ? t : e"""
        if s == TRUE or t == e:
            return t
        if s == FALSE:
            return e
        if s < 0:
            s, t, e = -s, e, t
        if t == TRUE:
            return self.or2(s, e)
        if t == FALSE:
            return self.and2(-s, e)
        if e == TRUE:
            return self.or2(-s, t)
        if e == FALSE:
            return self.and2(s, t)
        if s == t:
            return self.or2(s, e)
        if s == -t:
            return self.and2(-s, e)
        if s == e:
            return self.and2(s, t)
        if s == -e:
            return self.or2(-s, t)
        key = (s, t, e)
        out = self.mux_cache.get(key)
        if out is None:
            out = self.new()
            self.cnf.add([-s, -t, out])
            self.cnf.add([-s, t, -out])
            self.cnf.add([s, -e, out])
            self.cnf.add([s, e, -out])
            self.cnf.add([-t, -e, out])
            self.cnf.add([t, e, -out])
            self.mux_cache[key] = out
        return out

    # word-level operators, least significant bit first

    def mux_word(self, s: int, t: Word, e: Word) -> Word:
        return [self.mux(s, ti, ei) for ti, ei in zip(t, e)]

    def add(self, a: Word, b: Word, carry: int = FALSE) -> Word:
        """Ripple-carry adder; the final carry is dropped"""
        out = []
        for ai, bi in zip(a, b):
            half = self.xor2(ai, bi)
            out.append(self.xor2(half, carry))
            carry = self.or2(self.and2(ai, bi), self.and2(half, carry))
        return out

    def invert(self, a: Word) -> Word:
        return [-bit for bit in a]

    def neg(self, a: Word) -> Word:
        return self.add(self.invert(a), [FALSE] * len(a), TRUE)

    def sub(self, a: Word, b: Word) -> Word:
        return self.add(a, self.invert(b), TRUE)

    def mul(self, a: Word, b: Word) -> Word:
        """Shift-and-add multiplier truncated to the operand width"""
        width = len(a)
        acc = [FALSE] * width
        for i, bi in enumerate(b):
            partial = [FALSE] * i + [self.and2(bi, aj) for aj in a[:width - i]]
            acc = self.add(acc, partial)
        return acc

    def eq(self, a: Word, b: Word) -> int:
        return self.and_all([self.xnor2(ai, bi) for ai, bi in zip(a, b)])

    def ult(self, a: Word, b: Word) -> int:
        lt = FALSE
        for ai, bi in zip(a, b):
            lt = self.mux(self.xor2(ai, bi), bi, lt)
        return lt

    def slt(self, a: Word, b: Word) -> int:
        return self.ult(a[:-1] + [-a[-1]], b[:-1] + [-b[-1]])

    def udivmod(self, a: Word, b: Word) -> tuple[Word, Word]:
        """Restoring division; quotient and remainder of unsigned words"""
        width = len(a)
        divisor = b + [FALSE]
        rem = [FALSE] * width
        quotient = [FALSE] * width
        for i in reversed(range(width)):
            shifted = [a[i]] + rem
            diff = self.sub(shifted, divisor)
            fits = -self.ult(shifted, divisor)
            quotient[i] = fits
            rem = self.mux_word(fits, diff, shifted)[:width]
        return quotient, rem

    def sdivmod(self, a: Word, b: Word) -> tuple[Word, Word]:
        """Truncating signed division; the remainder takes the dividend's sign"""
        sa, sb = a[-1], b[-1]
        abs_a = self.mux_word(sa, self.neg(a), a)
        abs_b = self.mux_word(sb, self.neg(b), b)
        q, r = self.udivmod(abs_a, abs_b)
        return self.mux_word(self.xor2(sa, sb), self.neg(q), q), self.mux_word(sa, self.neg(r), r)
