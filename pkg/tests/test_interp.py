import unittest

from swarm_bmc.benchmarks import load_benchmark
from swarm_bmc.bmc.counterexample import Counterexample
from swarm_bmc.errors import SpaceTooLarge, WidthOutOfRange
from swarm_bmc.frontend import parse
from swarm_bmc.interp import (
    Fails, NondetTape, OutcomeKind, SafeWithinBound, enumerate_bounded, execute, replay, run_ssa,
)
from swarm_bmc.interp.oracle import TapeSpace, completed_tapes, failing_tapes
from swarm_bmc.semantics import apply_binary, apply_unary, truncated_div, wrap
from swarm_bmc.transform import omit_features, to_ssa

test_stack = load_benchmark("stack", {"SIZE": 2, "TLEN": 3})
stack_domain = {"action": [0, 1, 2], "v": [0]}

test_counter = parse("""
func main() {
  int x = havoc();
  x = x + 1;
  assert(x != 3);
}
""", path="counter.imp")


def cex_for(p, tape, outcome, width=8):
    return Counterexample(NondetTape(tape, width), outcome.stmt_id, p.location(outcome.stmt_id), width=width)


class TestSemantics(unittest.TestCase):
    def test_wrap(self):
        self.assertEqual(wrap(127, 8), 127)
        self.assertEqual(wrap(128, 8), -128)
        self.assertEqual(wrap(-129, 8), 127)
        self.assertEqual(wrap(255, 8), -1)
        self.assertEqual(wrap(8, 4), -8)

    def test_division(self):
        self.assertEqual(truncated_div(-7, 2), -3)
        self.assertEqual(apply_binary("/", -7, 2, 8), -3)
        self.assertEqual(apply_binary("%", -7, 2, 8), -1)
        self.assertEqual(apply_binary("%", 7, -2, 8), 1)
        self.assertEqual(apply_binary("/", -128, -1, 8), -128)
        self.assertEqual(apply_binary("%", -128, -1, 8), 0)

    def test_operators(self):
        self.assertEqual(apply_binary("*", 16, 16, 8), 0)
        self.assertEqual(apply_unary("-", -128, 8), -128)
        self.assertIs(apply_unary("!", True, 8), False)
        self.assertIs(apply_binary("<=", 3, 3, 8), True)
        with self.assertRaises(ValueError):
            apply_binary("<<", 1, 1, 8)


class TestInterpreter(unittest.TestCase):
    def test_completed(self):
        outcome = execute(test_counter, [5])
        self.assertEqual(outcome.kind, OutcomeKind.COMPLETED)
        self.assertEqual(outcome.consumed, 1)
        self.assertFalse(outcome.violated)

    def test_violation(self):
        outcome = execute(test_counter, [2])
        self.assertTrue(outcome.violated)
        self.assertEqual(test_counter.location(outcome.stmt_id).line, 5)
        self.assertEqual(outcome.step_index, outcome.steps)

    def test_tape_exhausted(self):
        outcome = execute(test_counter, [])
        self.assertEqual(outcome.kind, OutcomeKind.TAPE_EXHAUSTED)
        self.assertEqual(outcome.variable, "x")

    def test_tape_wraps(self):
        self.assertEqual(NondetTape([200, -1], 8).values, (-56, -1))
        self.assertTrue(execute(test_counter, [258]).violated)
        self.assertEqual(str(NondetTape([1, 2])), "[1, 2]")

    def test_trace(self):
        outcome = execute(test_counter, [2], record_trace=True)
        self.assertEqual([step.values for step in outcome.trace], [{"x": 0}, {"x": 2}, {"x": 3}])
        self.assertEqual([step.line for step in outcome.trace], [3, 3, 4])

    def test_division_by_zero(self):
        p = parse("func main() { int x = havoc(); int y = 10 / x; }")
        self.assertTrue(execute(p, [0]).violated)
        self.assertEqual(execute(p, [3]).kind, OutcomeKind.COMPLETED)

    def test_out_of_bounds(self):
        p = parse("int a[2]; func main() { int i = havoc(); a[i] = 1; assert(a[i] == 1); }")
        self.assertEqual(execute(p, [1]).kind, OutcomeKind.COMPLETED)
        self.assertTrue(execute(p, [2]).violated)
        self.assertTrue(execute(p, [-1]).violated)

    def test_int_min(self):
        p = parse("func main() { int x = havoc(); int y = x / -1; assert(y == 0 - x); }")
        self.assertEqual(execute(p, [-128]).kind, OutcomeKind.COMPLETED)

    def test_step_limit(self):
        p = parse("func main() { while (true) { } }")
        self.assertEqual(execute(p, step_limit=100).kind, OutcomeKind.STEP_LIMIT)

    def test_unwind(self):
        p = parse("func main() { int i = 0; while (i < 5) { i = i + 1; } assert(i == 5); }")
        outcome = execute(p, unwind=3)
        self.assertEqual(outcome.kind, OutcomeKind.ASSUME_BLOCKED)
        self.assertEqual(p.location(outcome.stmt_id).line, 1)
        self.assertEqual(execute(p, unwind=5).kind, OutcomeKind.COMPLETED)

    def test_assume(self):
        p = parse("func main() { int x = havoc(); assume(x > 0); assert(x > 0); }")
        self.assertEqual(execute(p, [-4]).kind, OutcomeKind.ASSUME_BLOCKED)
        self.assertEqual(execute(p, [4]).kind, OutcomeKind.COMPLETED)

    def test_log(self):
        outcome = execute(test_stack, [1, 7, 0, 2])
        self.assertEqual(outcome.log, ("push", "top", "pop"))
        self.assertEqual(outcome.kind, OutcomeKind.COMPLETED)

    def test_globals(self):
        p = parse("int g = 3; int a[2]; func main() { assert(g == 3 && a[1] == 0); }")
        self.assertEqual(execute(p).kind, OutcomeKind.COMPLETED)

    def test_bad_width(self):
        with self.assertRaises(WidthOutOfRange):
            execute(test_counter, [1], width=65)


class TestOracle(unittest.TestCase):
    def test_stack_fails(self):
        verdict = enumerate_bounded(test_stack, 3, havoc_domain=stack_domain)
        self.assertIsInstance(verdict, Fails)
        # three pushes is the lexicographically first overflow
        self.assertEqual(verdict.tape.values, (1, 0, 1, 0, 1, 0))
        self.assertEqual(test_stack.location(verdict.outcome.stmt_id).line, 21)

    def test_omit_push_safe(self):
        variant = omit_features(test_stack, ["push"]).program
        verdict = enumerate_bounded(variant, 3, havoc_domain=stack_domain)
        self.assertIsInstance(verdict, SafeWithinBound)
        # every sequence of tops and pops
        self.assertEqual(verdict.completed, 8)

    def test_failing_and_completed(self):
        self.assertEqual(failing_tapes(test_stack, 3, havoc_domain=stack_domain), [NondetTape([1, 0, 1, 0, 1, 0])])
        self.assertEqual(len(completed_tapes(test_stack, 3, havoc_domain=stack_domain)), 26)

    def test_flat_domain(self):
        verdict = enumerate_bounded(test_counter, 1, width=4, havoc_domain=[0, 1, 2])
        self.assertEqual(verdict.tape.values, (2,))

    def test_full_domain(self):
        verdict = enumerate_bounded(test_counter, 1, width=4)
        self.assertEqual(verdict.tape.values, (2,))
        safe = parse("func main() { int x = havoc(); assert(x * 2 != 1); }")
        self.assertEqual(enumerate_bounded(safe, 1, width=4), SafeWithinBound(16, 16))

    def test_space_too_large(self):
        with self.assertRaises(SpaceTooLarge):
            enumerate_bounded(load_benchmark("stack"), 12)

    def test_space_counts_one_branch(self):
        p = parse("""
func main() {
  int x = havoc();
  int y = 0;
  if (x > 0) { y = havoc(); } else { if (x < -5) { y = havoc(); } else { y = havoc(); } }
  assert(y != 7 || x != 3);
}
""")
        self.assertEqual(TapeSpace(8, None).size(p, 1), 256 * 256)
        self.assertEqual(TapeSpace(8, [0, 1, 2]).size(p, 1), 9)
        verdict = enumerate_bounded(p, 1, width=4)
        self.assertEqual(verdict.tape.values, (3, 7))

    def test_space_unrolled_loop(self):
        p = parse("func main() { int i = 0; int v; while (i < 5) { v = havoc(); i = i + 1; } }")
        self.assertEqual(TapeSpace(8, [0, 1]).size(p, 3), 8)


class TestReplay(unittest.TestCase):
    def test_confirms(self):
        verdict = enumerate_bounded(test_stack, 3, havoc_domain=stack_domain)
        self.assertTrue(replay(test_stack, cex_for(test_stack, verdict.tape, verdict.outcome)))

    def test_corrupted_tape(self):
        verdict = enumerate_bounded(test_stack, 3, havoc_domain=stack_domain)
        cex = cex_for(test_stack, [1, 0, 1, 0, 0], verdict.outcome)
        self.assertFalse(replay(test_stack, cex))

    def test_match_by_line(self):
        outcome = execute(test_counter, [2])
        cex = Counterexample(NondetTape([2]), -1, test_counter.location(outcome.stmt_id))
        self.assertTrue(replay(test_counter, cex))
        cex = Counterexample(NondetTape([3]), -1, test_counter.location(outcome.stmt_id))
        self.assertFalse(replay(test_counter, cex))

    def test_other_assert(self):
        p = parse("func main() { int x = havoc(); assert(x != 1); assert(x != 2); }")
        first = execute(p, [1])
        cex = cex_for(p, [2], first)
        self.assertFalse(replay(p, cex))


class TestSsaEval(unittest.TestCase):
    def test_missing_nondets(self):
        run = run_ssa(to_ssa(test_counter, 8), {})
        self.assertEqual(run.env["x#3"], 1)
        self.assertIsNone(run.violated)
        self.assertEqual(run.executed, ("x#2",))

    def test_violation(self):
        run = run_ssa(to_ssa(test_counter, 8), {"x#2": 2})
        self.assertEqual(run.violated.aid, 1)
        self.assertFalse(run.blocked)


if __name__ == '__main__':
    unittest.main()
