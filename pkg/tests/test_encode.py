import io
import random
import unittest

from z3 import Not, Solver, is_true, sat

from swarm_bmc.benchmarks import load_benchmark
from swarm_bmc.bmc import BmcOptions, Status, check
from swarm_bmc.encode.bitblast import BitBlaster, encode, export_dimacs
from swarm_bmc.encode.circuit import FALSE, TRUE, CircuitBuilder
from swarm_bmc.encode.cnf import CnfFormula, dimacs_text, parse_dimacs
from swarm_bmc.encode.slicer import simplify, slice_ssa
from swarm_bmc.errors import DimacsError
from swarm_bmc.frontend import parse
from swarm_bmc.interp import Fails, OutcomeKind, enumerate_bounded, execute, replay
from swarm_bmc.sat.cdcl import Sat, Unsat, check_model, solve
from swarm_bmc.sat.z3_backend import solve_z3, to_z3
from swarm_bmc.semantics import apply_binary, to_unsigned, wrap
from swarm_bmc.transform import inline_calls, omit_features, to_ssa, unroll
from swarm_bmc.transform.ssa import AssertStep

OPERATORS = ("+", "-", "*", "/", "%", "<", "<=", ">", ">=", "==", "!=")


def ssa_of(p, k, width=8, sliced=False):
    s = to_ssa(unroll(inline_calls(p), k), width, k)
    return slice_ssa(s) if sliced else s


def signed(bits: list[bool]) -> int:
    return wrap(sum(1 << i for i, b in enumerate(bits) if b), len(bits))


class TestCircuit(unittest.TestCase):
    def check_operator(self, op: str, width: int, rng: random.Random):
        blaster = BitBlaster(width, CircuitBuilder())
        a = blaster.builder.word(width)
        b = blaster.builder.word(width)
        out = blaster.binary(op, a, b)
        atoms, clauses = to_z3(blaster.builder.cnf)
        solver = Solver()
        solver.add(clauses)

        def lit(m, literal: int) -> bool:
            value = is_true(m.eval(atoms[abs(literal)], model_completion=True))
            return value if literal > 0 else not value

        low, high = -(1 << (width - 1)), (1 << (width - 1)) - 1
        for _ in range(200):
            x, y = rng.randint(low, high), rng.randint(low, high)
            if op in ("/", "%") and y == 0:
                y = 1
            assumptions = []
            for word, value in ((a, x), (b, y)):
                for i, bit in enumerate(word):
                    assumptions.append(atoms[bit] if (to_unsigned(value, width) >> i) & 1 else Not(atoms[bit]))
            self.assertEqual(solver.check(assumptions), sat)
            m = solver.model()
            expected = apply_binary(op, x, y, width)
            if isinstance(out, int):
                self.assertEqual(lit(m, out), expected, (op, width, x, y))
            else:
                self.assertEqual(signed([lit(m, bit) for bit in out]), expected, (op, width, x, y))

    def test_operators(self):
        rng = random.Random(7)
        for width in (4, 8):
            for op in OPERATORS:
                with self.subTest(op=op, width=width):
                    self.check_operator(op, width, rng)

    def test_int_min_division(self):
        b = CircuitBuilder()
        q, r = b.sdivmod(b.const_word(to_unsigned(-8, 4), 4), b.const_word(to_unsigned(-1, 4), 4))
        self.assertEqual(q, b.const_word(to_unsigned(-8, 4), 4))
        self.assertEqual(r, [FALSE] * 4)

    def test_constant_folding(self):
        b = CircuitBuilder()
        x = b.new()
        self.assertEqual(b.and_all([x, TRUE]), x)
        self.assertEqual(b.and_all([x, -x]), FALSE)
        self.assertEqual(b.or2(x, TRUE), TRUE)
        self.assertEqual(b.and2(x, x), x)
        # structural hashing
        y = b.new()
        self.assertEqual(b.and2(x, y), b.and2(y, x))


class TestDimacs(unittest.TestCase):
    def test_parse_1(self):
        cnf = parse_dimacs("c hello\np cnf 3 2\n1 -2 0\n2 3\n0\n")
        self.assertEqual(cnf.num_vars, 3)
        self.assertEqual(cnf.clauses, [[1, -2], [2, 3]])

    def test_text(self):
        cnf = CnfFormula(2, [[1, -2], [2]])
        self.assertEqual(dimacs_text(cnf, ["note"]), "c note\np cnf 2 2\n1 -2 0\n2 0\n")
        self.assertEqual(parse_dimacs(dimacs_text(cnf)), cnf)

    def test_errors(self):
        for text in ("1 0\n", "p cnf 1 1\n2 0\n", "p cnf 1 2\n1 0\n", "p cnf x 1\n1 0\n",
                     "p cnf 1 1\np cnf 1 1\n1 0\n", "p cnf 1 1\n1 a 0\n"):
            with self.subTest(text=text):
                with self.assertRaises(DimacsError):
                    parse_dimacs(text)

    def test_export(self):
        p = load_benchmark("stack", {"SIZE": 2, "TLEN": 3})
        e = encode(ssa_of(p, 3, 4))
        sink = io.StringIO()
        export_dimacs(e, sink)
        text = sink.getvalue()
        self.assertTrue(text.startswith("c swarm-bmc instance width=4"))
        self.assertIn("selector", text)
        back = parse_dimacs(text)
        self.assertEqual(back.clauses, e.cnf.clauses)
        binary = io.BytesIO()
        export_dimacs(e, binary)
        self.assertEqual(binary.getvalue().decode("ascii"), text)


class TestEncode(unittest.TestCase):
    def test_selectors(self):
        p = parse("func main() { int x = havoc(); assert(x != 3); assert(x != 4); }")
        e = encode(to_ssa(p, 8))
        self.assertEqual(sorted(e.assert_selectors), [1, 2])
        self.assertEqual(e.nondet_names, ["x#2"])
        self.assertEqual(len(e.var_map["x#2"]), 8)

    def test_trivially_safe(self):
        e = encode(to_ssa(parse("func main() { int x = 1; assert(x == 1); }"), 8))
        self.assertEqual(e.assert_selectors, {1: FALSE})
        self.assertIsInstance(solve(e.cnf), Unsat)

    def test_model_violates(self):
        p = parse("func main() { int x = havoc(); int y = x * 3; assert(y != 21); }")
        e = encode(to_ssa(p, 8))
        result = solve(e.cnf)
        self.assertIsInstance(result, Sat)
        self.assertTrue(check_model(e.cnf, result.model))
        bits = [result.model.lit(lit) for lit in e.var_map["x#2"]]
        self.assertEqual(apply_binary("*", signed(bits), 3, 8), 21)

    def test_prefix_semantics(self):
        # a violation before a failing assume still counts
        p = parse("func main() { assert(false); assume(false); }")
        self.assertIsInstance(solve(encode(to_ssa(p, 8)).cnf), Sat)
        p = parse("func main() { assume(false); assert(false); }")
        self.assertIsInstance(solve(encode(to_ssa(p, 8)).cnf), Unsat)

    def test_agrees_with_z3(self):
        p = load_benchmark("stack", {"SIZE": 2, "TLEN": 3})
        for omitted in ([], ["push"], ["pop"], ["top"]):
            e = encode(ssa_of(omit_features(p, omitted).program, 3, 4))
            with self.subTest(omitted=omitted):
                self.assertEqual(type(solve(e.cnf)), type(solve_z3(e.cnf)))


class TestSlicer(unittest.TestCase):
    def test_guard_forcing(self):
        p = parse("""
        func main() {
          int x = havoc();
          if (x > 0) {
            assume(false);
            assert(x == 1);
          }
          assert(x < 100);
        }
        """)
        s = simplify(to_ssa(p, 8))
        conds = [str(step.cond) for step in s.steps if isinstance(step, AssertStep)]
        self.assertEqual(len(conds), 1)

    def test_blocked_tail(self):
        p = parse("func main() { int x = havoc(); assume(false); assert(x == 1); }")
        s = simplify(to_ssa(p, 8))
        self.assertEqual(s.asserts, [])
        self.assertEqual(len(s.nondets), 1)

    def test_cone_of_influence(self):
        p = parse("""
        int unused;
        func main() {
          int x = havoc();
          int y = havoc();
          unused = y * y + 1;
          assert(x != 5);
        }
        """)
        sliced = slice_ssa(to_ssa(p, 8))
        self.assertEqual([eq.name for eq in sliced.defs if eq.name.startswith("unused")], [])
        full = encode(to_ssa(p, 8))
        self.assertLess(encode(sliced, sliced=True).stats.num_clauses, full.stats.num_clauses)

    def test_slicing_preserves_verdicts(self):
        p = load_benchmark("stack", {"SIZE": 2, "TLEN": 4})
        for omitted in ([], ["pop"], ["push"], ["top"]):
            variant = omit_features(p, omitted).program
            for k in (2, 4):
                unsliced = encode(ssa_of(variant, k, 4))
                sliced = encode(ssa_of(variant, k, 4, sliced=True), sliced=True)
                with self.subTest(omitted=omitted, k=k):
                    self.assertLessEqual(sliced.stats.num_clauses, unsliced.stats.num_clauses)
                    self.assertEqual(type(solve(sliced.cnf)), type(solve(unsliced.cnf)))

    def test_omit_pop_smaller(self):
        p = omit_features(load_benchmark("stack", {"SIZE": 2, "TLEN": 4}), ["pop"]).program
        unsliced = encode(ssa_of(p, 4, 4))
        sliced = encode(ssa_of(p, 4, 4, sliced=True), sliced=True)
        self.assertLess(sliced.stats.num_clauses, unsliced.stats.num_clauses)
        self.assertTrue(sliced.stats.sliced)


def random_expr(rng: random.Random, names: list[str], depth: int = 2) -> str:
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(names + [str(rng.randint(0, 3))])
    op = rng.choice(("+", "-", "*", "/", "%"))
    return f"({random_expr(rng, names, depth - 1)} {op} {random_expr(rng, names, depth - 1)})"


def random_cond(rng: random.Random, names: list[str]) -> str:
    rel = rng.choice(("<", "<=", ">", ">=", "==", "!="))
    return f"{random_expr(rng, names, 1)} {rel} {random_expr(rng, names, 1)}"


def random_program(rng: random.Random, havocs: int) -> str:
    names = ["x", "y", "z"][:havocs]
    lines = [f"  int {name} = havoc();" for name in names]
    lines.append("  int i = 0;")
    for _ in range(rng.randint(2, 5)):
        target = rng.choice(names)
        match rng.randrange(5):
            case 0:
                lines.append(f"  {target} = {random_expr(rng, names)};")
            case 1:
                lines.append(f"  if ({random_cond(rng, names)}) {{ {target} = {random_expr(rng, names)}; }}"
                             f" else {{ {target} = {random_expr(rng, names)}; }}")
            case 2:
                lines.append("  i = 0;")
                lines.append(f"  while (i < {names[0]}) {{ {target} = {random_expr(rng, names, 1)}; i = i + 1; }}")
            case 3:
                lines.append(f"  assume({random_cond(rng, names)});")
            case 4:
                lines.append(f"  assert({random_cond(rng, names)});")
    lines.append(f"  assert({random_cond(rng, names)});")
    return "func main() {\n" + "\n".join(lines) + "\n}\n"


class TestAgainstInterpreter(unittest.TestCase):
    def test_random_programs(self):
        rng = random.Random(11)
        for n in range(30):
            havocs = rng.randint(1, 3)
            width = 3 if havocs == 3 else rng.choice((3, 4))
            k = rng.randint(1, 4)
            source = random_program(rng, havocs)
            p = parse(source, path=f"random{n}.imp")
            verdict = enumerate_bounded(p, k, width=width)
            for slicing in (False, True):
                outcome = check(p, BmcOptions(depth=k, width=width, slicing=slicing))
                with self.subTest(program=source, k=k, width=width, slicing=slicing):
                    self.assertNotEqual(outcome.status, Status.RESOURCE_OUT)
                    self.assertEqual(outcome.status is Status.COUNTEREXAMPLE, isinstance(verdict, Fails))
                    if outcome.counterexample is not None:
                        self.assertTrue(replay(p, outcome.counterexample))

    def test_random_expressions(self):
        rng = random.Random(5)
        for _ in range(40):
            width = rng.choice((4, 8))
            half = 1 << (width - 1)
            a, b = rng.randrange(-half, half), rng.randrange(-half, half)
            e = random_expr(rng, ["a", "b"], 3)
            prefix = f"func main() {{ int a = havoc(); int b = havoc(); assume(a == {a} && b == {b}); int r = {e};"
            run = execute(parse(prefix + " }"), [a, b], width=width, record_trace=True)
            if run.kind is not OutcomeKind.COMPLETED:
                # division by zero on these inputs
                continue
            value = next(step.values["r"] for step in reversed(run.trace) if "r" in step.values)
            opts = BmcOptions(depth=1, width=width)
            with self.subTest(expr=e, a=a, b=b, width=width):
                self.assertEqual(check(parse(f"{prefix} assert(r != {value}); }}"), opts).status,
                                 Status.COUNTEREXAMPLE)
                self.assertEqual(check(parse(f"{prefix} assert(r == {value}); }}"), opts).status, Status.VERIFIED)


if __name__ == '__main__':
    unittest.main()
