import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from swarm_bmc.benchmarks import benchmark_path
from swarm_bmc.cli import main
from swarm_bmc.cli.main import define, labels
from swarm_bmc.encode.cnf import parse_dimacs

stack = str(benchmark_path("stack"))
small = ["-D", "SIZE=2", "-D", "TLEN=3", "--depth", "3", "--width", "4"]


def run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestCli(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name: str, text: str | None = None) -> str:
        full = os.path.join(self.tmp.name, name)
        if text is not None:
            with open(full, "w") as f:
                f.write(text)
        return full

    # features

    def test_features(self):
        code, out, _ = run("features", stack)
        self.assertEqual((code, out), (0, "pop\npush\ntop\n"))

    def test_features_bundled_name(self):
        code, out, _ = run("features", "queue.imp")
        self.assertEqual(code, 0)
        self.assertEqual(out.split(), ["dequeue", "dispose", "enqueue", "front", "isempty"])

    def test_featureless(self):
        code, out, _ = run("features", self.path("plain.imp", "func main() { int x = 1; }"))
        self.assertEqual((code, out), (0, ""))

    def test_missing_file(self):
        code, _, err = run("features", "nowhere/missing.imp")
        self.assertEqual(code, 2)
        self.assertIn("nowhere/missing.imp", err)

    def test_parse_error(self):
        code, _, err = run("features", self.path("bad.imp", "func main() {\n  x = ;\n}\n"))
        self.assertEqual(code, 2)
        self.assertIn("bad.imp:2:", err)

    def test_validation_error(self):
        code, _, err = run("features", self.path("bad.imp", "func main() { x = 1; }"))
        self.assertEqual(code, 2)
        self.assertIn("error", err)

    # check

    def test_check_counterexample(self):
        code, out, _ = run("check", stack, *small)
        self.assertEqual(code, 10)
        self.assertTrue(out.startswith("counterexample: bounds violated at"))
        self.assertIn("line 21:", out)

    def test_check_verified(self):
        code, out, _ = run("check", stack, *small, "--omit", "push", "--slice", "--stats")
        self.assertEqual(code, 0)
        self.assertIn("verified to depth 3", out)
        self.assertIn("sliced=True", out)

    def test_check_unknown_feature(self):
        code, _, err = run("check", stack, *small, "--omit", "nosuch")
        self.assertEqual(code, 2)
        self.assertIn("nosuch", err)

    def test_check_conflict(self):
        code, _, _ = run("check", stack, *small, "--omit", "pop", "--require", "pop")
        self.assertEqual(code, 2)

    def test_check_resource_out(self):
        code, out, _ = run("check", stack, *small, "--timeout", "0")
        self.assertEqual(code, 20)
        self.assertIn("resource out", out)

    def test_check_json(self):
        code, out, _ = run("check", stack, *small, "--json")
        data = json.loads(out)
        self.assertEqual(code, 10)
        self.assertEqual(data["status"], "counterexample")
        self.assertEqual(data["manifest"]["argv"][:2], ["check", stack])
        self.assertEqual(data["manifest"]["options"]["depth"], 3)
        self.assertEqual(len(data["manifest"]["input_sha256"]), 64)
        self.assertEqual(data["counterexample"]["depth"], 3)

    def test_check_dimacs(self):
        target = self.path("out.cnf")
        code, _, _ = run("check", stack, *small, "--dimacs", target)
        self.assertEqual(code, 10)
        with open(target) as f:
            cnf = parse_dimacs(f.read())
        self.assertGreater(cnf.num_clauses, 0)

    def test_emit_ssa(self):
        code, _, err = run("check", stack, *small, "--emit-ssa")
        self.assertEqual(code, 10)
        self.assertIn("ASSERT", err)
        self.assertIn(":= havoc()", err)

    def test_bad_width(self):
        self.assertEqual(run("check", stack, "--width", "1")[0], 2)

    # replay

    def test_replay_own_counterexample(self):
        _, out, _ = run("check", stack, *small, "--json")
        trace = self.path("cex.json", out)
        code, out, _ = run("replay", stack, "-D", "SIZE=2", "-D", "TLEN=3", "--trace", trace)
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("confirmed"))

    def test_replay_variant_on_base(self):
        _, out, _ = run("check", stack, *small, "--omit", "pop", "--json")
        cex = json.loads(out)["counterexample"]
        trace = self.path("cex.json", json.dumps(cex))
        code, _, _ = run("replay", stack, "-D", "SIZE=2", "-D", "TLEN=3", "--trace", trace)
        self.assertEqual(code, 0)

    def test_replay_corrupted(self):
        _, out, _ = run("check", stack, *small, "--json")
        cex = json.loads(out)["counterexample"]
        # turn every push into a top
        cex["tape"] = [0 for _ in cex["tape"]]
        trace = self.path("cex.json", json.dumps(cex))
        code, out, _ = run("replay", stack, "-D", "SIZE=2", "-D", "TLEN=3", "--trace", trace)
        self.assertEqual(code, 1)
        self.assertTrue(out.startswith("not confirmed"))

    def test_replay_bad_json(self):
        trace = self.path("cex.json", "{not json")
        self.assertEqual(run("replay", stack, "--trace", trace)[0], 2)
        trace = self.path("cex2.json", json.dumps({"tape": []}))
        self.assertEqual(run("replay", stack, "--trace", trace)[0], 2)

    # solve

    def test_solve_sat(self):
        code, out, _ = run("solve", "--dimacs-in", self.path("f.cnf", "p cnf 1 1\n1 0\n"))
        self.assertEqual((code, out), (10, "SAT\nv 1 0\n"))

    def test_solve_unsat(self):
        code, out, _ = run("solve", "--dimacs-in", self.path("f.cnf", "p cnf 1 2\n1 0\n-1 0\n"))
        self.assertEqual((code, out), (0, "UNSAT\n"))

    def test_solve_empty_model(self):
        code, out, _ = run("solve", "--dimacs-in", self.path("f.cnf", "p cnf 0 0\n"))
        self.assertEqual((code, out), (10, "SAT\nv 0\n"))

    def test_solve_unknown(self):
        code, out, _ = run("solve", "--dimacs-in", self.path("f.cnf", "p cnf 2 1\n1 2 0\n"), "--timeout", "0")
        self.assertEqual((code, out), (20, "UNKNOWN\n"))

    def test_solve_z3(self):
        code, out, _ = run("solve", "--backend", "z3", "--dimacs-in", self.path("f.cnf", "p cnf 2 2\n-1 0\n2 0\n"))
        self.assertEqual((code, out), (10, "SAT\nv -1 2 0\n"))

    def test_solve_malformed(self):
        code, _, err = run("solve", "--dimacs-in", self.path("f.cnf", "p cnf 1 1\n3 0\n"))
        self.assertEqual(code, 2)
        self.assertIn("DIMACS line 2", err)

    # swarm

    def test_swarm_table(self):
        code, out, _ = run("swarm", stack, *small, "--keep-going")
        self.assertEqual(code, 10)
        lines = out.splitlines()
        self.assertTrue(lines[0].startswith("Omitted Feature"))
        rows = {line.split()[0]: line.split()[1] for line in lines[2:6]}
        self.assertEqual(rows, {"(none)": "Counterexample", "pop": "Counterexample", "push": "Verified",
                                "top": "Counterexample"})
        self.assertTrue(lines[-1].startswith("falsified by config baseline"))

    def test_swarm_verified(self):
        code, out, _ = run("swarm", stack, "-D", "SIZE=3", "-D", "TLEN=3", "--depth", "3", "--width", "4")
        self.assertEqual(code, 0)
        self.assertIn("verified to depth 3", out)

    def test_swarm_half_deterministic(self):
        argv = ("swarm", stack, *small, "--strategy", "half", "--configs", "8", "--seed", "42", "--json")
        first, second = json.loads(run(*argv)[1]), json.loads(run(*argv)[1])
        self.assertEqual([c["label"] for c in first["configs"]], [c["label"] for c in second["configs"]])
        self.assertEqual(first["manifest"]["options"]["seed"], 42)

    def test_bench_unknown(self):
        self.assertEqual(run("bench", "nosuch")[0], 2)

    # argument parsing

    def test_define(self):
        self.assertEqual(define("SIZE=0x10"), ("SIZE", 16))
        self.assertEqual(labels("a, b,,c"), ["a", "b", "c"])
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(["check", stack, "-D", "SIZE"])
        self.assertEqual(ctx.exception.code, 2)

    def test_no_command(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main([])
        self.assertEqual(ctx.exception.code, 2)


if __name__ == '__main__':
    unittest.main()
