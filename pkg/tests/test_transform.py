import itertools
import unittest

from swarm_bmc.benchmarks import load_benchmark
from swarm_bmc.errors import FeatureConflict, UnknownFeature, WidthOutOfRange
from swarm_bmc.frontend import FeatureSet, parse
from swarm_bmc.frontend.syntax import Assume, BoolLit, Call, For, If, Log, Stmt, While
from swarm_bmc.interp.interpreter import OutcomeKind, execute
from swarm_bmc.interp.oracle import completed_tapes, explore, failing_tapes
from swarm_bmc.interp.ssa_eval import run_ssa
from swarm_bmc.transform import (
    dump_ssa, inline_calls, make_variant, omit_features, require_features, to_ssa, unroll,
)
from swarm_bmc.transform.ssa import Equation

test_stack = load_benchmark("stack", {"SIZE": 2, "TLEN": 3})
stack_domain = {"action": [0, 1, 2], "v": [0]}

test_abs = parse("""
int g;
func main() {
  int x = havoc();
  if (x > 0) {
    g = x;
  } else {
    g = 0 - x;
  }
  assert(g >= 0);
}
""")


def walk(body: tuple[Stmt, ...]):
    for stmt in body:
        yield stmt
        match stmt:
            case If(_, then, orelse):
                yield from walk(then)
                yield from walk(orelse)
            case While(_, inner) | For(body=inner):
                yield from walk(inner)


def tape_for(actions) -> list[int]:
    tape = []
    for a in actions:
        tape.append(a)
        if a == 1:
            tape.append(0)
    return tape


def summary(outcome):
    return outcome.kind, outcome.stmt_id, outcome.log


class TestVariants(unittest.TestCase):
    def test_omit_1(self):
        variant = omit_features(test_stack, ["top"])
        self.assertEqual(variant.omitted, FeatureSet(["top"]))
        self.assertEqual(variant.label, "top")
        top = variant.program.function("top")
        self.assertEqual(top.body[0], Assume(BoolLit(False)))
        logs = [s for f in variant.program.functions for s in walk(f.body) if isinstance(s, Log)]
        self.assertEqual(logs, [])

    def test_omit_keeps_base(self):
        variant = omit_features(test_stack, ["push"])
        self.assertIs(variant.base, test_stack)
        self.assertIsInstance(test_stack.function("push").body[0], Log)

    def test_omitted_call_blocks(self):
        variant = omit_features(test_stack, ["pop"])
        outcome = execute(variant.program, tape_for([2]))
        self.assertEqual(outcome.kind, OutcomeKind.ASSUME_BLOCKED)
        outcome = execute(variant.program, tape_for([1, 1, 1]))
        self.assertEqual(outcome.kind, OutcomeKind.ASSERTION_VIOLATION)

    def test_unknown_feature(self):
        with self.assertRaises(UnknownFeature) as ctx:
            omit_features(test_stack, ["nosuch"])
        self.assertEqual(ctx.exception.labels, ["nosuch"])

    def test_conflict(self):
        with self.assertRaises(FeatureConflict):
            make_variant(test_stack, ["push"], ["push"])

    def test_empty_omission_is_baseline(self):
        variant = omit_features(test_stack, [])
        self.assertEqual(variant.label, "baseline")
        self.assertEqual(execute(variant.program, tape_for([1, 1, 1])).kind, OutcomeKind.ASSERTION_VIOLATION)

    def test_require_1(self):
        variant = require_features(test_stack, ["top", "pop"])
        self.assertEqual(variant.program.assert_gate, ("seen_pop", "seen_top"))
        names = [g.name for g in variant.program.globals]
        self.assertIn("seen_pop", names)
        self.assertIn("seen_top", names)

    def test_require_gates_violation(self):
        variant = require_features(test_stack, ["pop"])
        # overflow without a pop is not a violation of the variant
        self.assertEqual(execute(variant.program, tape_for([1, 1, 1])).kind, OutcomeKind.ASSUME_BLOCKED)
        # completing without a pop is blocked at exit
        self.assertEqual(execute(variant.program, tape_for([0, 0, 0])).kind, OutcomeKind.ASSUME_BLOCKED)
        self.assertEqual(execute(variant.program, tape_for([0, 2, 0])).kind, OutcomeKind.COMPLETED)

    def test_require_then_violation(self):
        p = load_benchmark("stack", {"SIZE": 2, "TLEN": 4})
        variant = require_features(p, ["pop"])
        outcome = execute(variant.program, tape_for([2, 1, 1, 1]))
        self.assertEqual(outcome.kind, OutcomeKind.ASSERTION_VIOLATION)
        self.assertEqual(outcome.stmt_id, execute(p, tape_for([2, 1, 1, 1])).stmt_id)

    def test_omission_shrinks_failing_tapes(self):
        p = load_benchmark("stack", {"SIZE": 1, "TLEN": 3})
        subsets = [list(c) for n in range(4) for c in itertools.combinations(["pop", "push", "top"], n)]
        failing = {tuple(s): set(failing_tapes(omit_features(p, s).program, 3, havoc_domain=stack_domain))
                   for s in subsets}
        self.assertGreater(len(failing[()]), 1)
        for smaller, larger in itertools.product(failing, repeat=2):
            if set(smaller) <= set(larger):
                self.assertGreaterEqual(failing[smaller], failing[larger], (smaller, larger))

    def test_variant_tapes_run_the_same_on_base(self):
        p = load_benchmark("stack", {"SIZE": 1, "TLEN": 3})
        variants = [omit_features(p, s) for s in ([], ["pop"], ["top"], ["push", "top"])]
        variants.append(require_features(p, ["pop"]))
        for variant in variants:
            for tape, outcome in explore(variant.program, 3, havoc_domain=stack_domain):
                if outcome.kind not in (OutcomeKind.COMPLETED, OutcomeKind.ASSERTION_VIOLATION):
                    continue
                base = execute(p, tape, unwind=3)
                with self.subTest(variant=variant.label, tape=tape):
                    self.assertEqual(base.kind, outcome.kind)
                    if outcome.violated:
                        self.assertEqual(p.location(base.stmt_id), variant.program.location(outcome.stmt_id))


class TestInline(unittest.TestCase):
    def test_no_calls(self):
        inlined = inline_calls(test_stack)
        calls = [s for s in walk(inlined.entry_function.body) if isinstance(s, Call)]
        self.assertEqual(calls, [])

    def test_same_outcomes(self):
        inlined = inline_calls(test_stack)
        for actions in itertools.product(range(3), repeat=3):
            tape = tape_for(actions)
            self.assertEqual(summary(execute(inlined, tape)), summary(execute(test_stack, tape)), actions)

    def test_early_return(self):
        p = parse("""
        func f(int x) {
          if (x > 0) {
            return 1;
          }
          return 2;
        }
        func main() {
          int r = havoc();
          r = f(r);
          assert(r == 1);
        }
        """)
        inlined = inline_calls(p)
        self.assertEqual(execute(inlined, [5]).kind, OutcomeKind.COMPLETED)
        self.assertEqual(execute(inlined, [-5]).kind, OutcomeKind.ASSERTION_VIOLATION)

    def test_locations_survive(self):
        inlined = inline_calls(test_stack)
        outcome = execute(inlined, tape_for([1, 1, 1]))
        self.assertEqual(inlined.location(outcome.stmt_id).line, 21)


class TestUnroll(unittest.TestCase):
    def test_loop_free(self):
        unrolled = unroll(inline_calls(test_stack), 2)
        loops = [s for s in walk(unrolled.entry_function.body) if isinstance(s, (While, For))]
        self.assertEqual(loops, [])

    def test_matches_unwind_bound(self):
        inlined = inline_calls(test_stack)
        for k in (1, 2, 3):
            unrolled = unroll(inlined, k)
            for actions in itertools.product(range(3), repeat=3):
                tape = tape_for(actions)
                self.assertEqual(summary(execute(unrolled, tape)),
                                 summary(execute(test_stack, tape, unwind=k)), (k, actions))

    def test_bad_bound(self):
        with self.assertRaises(ValueError):
            unroll(test_stack, 0)

    def test_completed_tapes_grow(self):
        p = parse("""
        func main() {
          int n = havoc();
          int i = 0;
          int s = 0;
          while (i < n) {
            s = s + i;
            i = i + 1;
          }
          assert(s != 100);
        }
        """)
        previous = set()
        for k in (1, 2, 3, 4):
            tapes = set(completed_tapes(p, k, havoc_domain=range(6)))
            self.assertLess(previous, tapes, k)
            unrolled = unroll(inline_calls(p), k + 1)
            for tape in tapes:
                self.assertEqual(execute(unrolled, tape).kind, OutcomeKind.COMPLETED, (k, tape))
            previous = tapes
        for k in (1, 2):
            self.assertLessEqual(set(completed_tapes(test_stack, k, havoc_domain=stack_domain)),
                                 set(completed_tapes(test_stack, k + 1, havoc_domain=stack_domain)))


class TestSsa(unittest.TestCase):
    def test_single_assignment(self):
        s = to_ssa(unroll(inline_calls(test_stack), 3), 8, 3)
        names = [step.name for step in s.steps if isinstance(step, Equation)]
        names += [n.name for _, n in s.nondets]
        self.assertEqual(len(names), len(set(names)))

    def test_abs(self):
        s = to_ssa(test_abs, 8)
        self.assertEqual([n.name for _, n in s.nondets], ["x#2"])
        self.assertEqual(len(s.asserts), 1)
        self.assertEqual(s.asserts[0].kind, "assert")
        self.assertIsNone(run_ssa(s, {"x#2": 5}).violated)
        self.assertIsNone(run_ssa(s, {"x#2": -7}).violated)
        # 0 - (-128) wraps to -128
        self.assertIsNotNone(run_ssa(s, {"x#2": -128}).violated)

    def test_bounds_checks(self):
        s = to_ssa(unroll(inline_calls(test_stack), 1), 8, 1)
        kinds = {a.kind for a in s.asserts}
        self.assertEqual(kinds, {"bounds"})

    def test_one_check_per_access(self):
        for k in (1, 2, 3):
            s = to_ssa(unroll(inline_calls(test_stack), k), 8, k)
            # one read in top and one write in push per iteration
            self.assertEqual([a.kind for a in s.asserts], ["bounds"] * (2 * k), k)
        p = parse("""
        int a[4];
        func main() {
          int i = havoc();
          int j = havoc();
          int y = havoc();
          int x = a[i] + a[j] / y;
          a[x % 4] = x;
          assert(x != 1);
        }
        """)
        kinds = [a.kind for a in to_ssa(p, 8).asserts]
        self.assertEqual(kinds.count("bounds"), 3)
        self.assertEqual(kinds.count("division"), 2)
        self.assertEqual(kinds.count("assert"), 1)

    def test_agrees_with_interpreter(self):
        unrolled = unroll(inline_calls(test_stack), 3)
        s = to_ssa(unrolled, 8, 3)
        names = [n.name for _, n in s.nondets]
        for actions in itertools.product(range(3), repeat=3):
            tape = tape_for(actions)
            outcome = execute(unrolled, tape)
            # feed the tape to the havocs in the order they execute
            values = iter(tape)
            nondets = {}
            run = run_ssa(s, nondets)
            for name in names:
                if name not in run.executed:
                    continue
                nondets[name] = next(values, 0)
                run = run_ssa(s, nondets)
            self.assertEqual(run.violated is not None, outcome.violated, actions)

    def test_dump(self):
        text = dump_ssa(to_ssa(test_abs, 8))
        self.assertIn("x#2 := havoc()", text)
        self.assertIn("ASSERT 1", text)

    def test_width(self):
        with self.assertRaises(WidthOutOfRange):
            to_ssa(test_abs, 1)


if __name__ == '__main__':
    unittest.main()
