import unittest

from swarm_bmc.benchmarks import BENCHMARKS, load_benchmark
from swarm_bmc.errors import ParseError, ValidationFailed
from swarm_bmc.frontend import (
    FeatureSet, SemanticErrorKind, extract_features, load_source, parse, pretty_print, validate,
)
from swarm_bmc.frontend.lexer import Lexer, TokenType
from swarm_bmc.frontend.syntax import Assign, Binary, Decl, Havoc, If, IntLit, Log, Var

test_source_1 = """
const N = 4;
int g = 1;
int a[N];

func inc(int x) {
  log("inc");
  return x + 1;
}

func main() {
  int y = havoc();
  if (y < 0) {
    y = 0;
  } else if (y > N) {
    y = N;
  } else {
    y = inc(y);
  }
  a[y - 1] = g;   // may be out of bounds when y == 0
  assert(y <= N + 1);
}
"""


def kinds(source: str) -> set[SemanticErrorKind]:
    return {e.kind for e in validate(parse(source))}


class TestLexer(unittest.TestCase):
    def test_tokens_1(self):
        tokens = Lexer("x <= 10 && !b").tokenize()
        self.assertEqual([t.type for t in tokens],
                         [TokenType.IDENT, TokenType.LE, TokenType.INT, TokenType.AND, TokenType.NOT,
                          TokenType.IDENT, TokenType.EOF])

    def test_tokens_2(self):
        tokens = Lexer('log("push"); // comment\nint').tokenize()
        self.assertEqual(tokens[2].value, "push")
        self.assertEqual(tokens[5].type, TokenType.KW_INT)
        self.assertEqual((tokens[5].line, tokens[5].column), (2, 1))

    def test_bad_character(self):
        with self.assertRaises(ParseError) as ctx:
            Lexer("x = 1 @ 2;").tokenize()
        self.assertEqual((ctx.exception.line, ctx.exception.column), (1, 7))

    def test_unterminated_string(self):
        with self.assertRaises(ParseError):
            Lexer('log("abc);').tokenize()


class TestParser(unittest.TestCase):
    def test_parse_1(self):
        p = parse(test_source_1)
        self.assertEqual([f.name for f in p.functions], ["inc", "main"])
        self.assertEqual(p.array_sizes(), {"a": 4})
        main = p.entry_function
        self.assertEqual(main.body[0], Decl("y"))
        self.assertEqual(main.body[1], Havoc("y"))
        self.assertIsInstance(main.body[2], If)

    def test_else_if_chain(self):
        chain = parse(test_source_1).entry_function.body[2]
        self.assertEqual(len(chain.orelse), 1)
        self.assertIsInstance(chain.orelse[0], If)
        self.assertEqual(str(chain.orelse[0].cond), "y > 4")

    def test_constants_substituted(self):
        p = parse("const K = 3; func main() { int x = K * 2; }")
        self.assertEqual(p.entry_function.body[0], Decl("x", Binary("*", IntLit(3), IntLit(2))))
        self.assertEqual(p.constants, {"K": 3})

    def test_defines_override(self):
        p = parse("const K = 3; func main() { int x = K; }", defines={"K": 7})
        self.assertEqual(p.entry_function.body[0], Decl("x", IntLit(7)))

    def test_assign_to_constant(self):
        with self.assertRaises(ParseError):
            parse("const K = 3; func main() { K = 2; }")

    def test_source_map(self):
        p = parse(test_source_1, path="t.imp")
        log = p.functions[0].body[0]
        self.assertIsInstance(log, Log)
        self.assertEqual(str(p.location(log.id)), "t.imp:7:3")

    def test_parse_error_position(self):
        with self.assertRaises(ParseError) as ctx:
            parse("func main() {\n  int x = ;\n}")
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.expected, "expression")

    def test_missing_semicolon(self):
        with self.assertRaises(ParseError) as ctx:
            parse("func main() { int x = 1 }")
        self.assertEqual(ctx.exception.expected, "';'")

    def test_print_round_trip(self):
        for name in BENCHMARKS:
            p = load_benchmark(name)
            self.assertEqual(parse(pretty_print(p)), p, name)

    def test_print_1(self):
        p = parse("func main() { int x = 1; x = -x + 2 * x; }")
        self.assertEqual(pretty_print(p), "func main() {\n    int x = 1;\n    x = -x + (2 * x);\n}\n")


class TestValidate(unittest.TestCase):
    def test_valid(self):
        self.assertEqual(validate(parse(test_source_1)), [])

    def test_benchmarks_valid(self):
        for name in BENCHMARKS:
            self.assertEqual(validate(load_benchmark(name)), [], name)

    def test_undeclared(self):
        self.assertEqual(kinds("func main() { x = 1; }"), {SemanticErrorKind.UNDECLARED})

    def test_redeclared(self):
        self.assertEqual(kinds("func main() { int x; int x; }"), {SemanticErrorKind.REDECLARED})

    def test_type_mismatch(self):
        self.assertEqual(kinds("func main() { int x = 1; if (x) { x = 2; } }"), {SemanticErrorKind.TYPE_MISMATCH})
        self.assertEqual(kinds("func main() { int x = 1 < 2; }"), {SemanticErrorKind.TYPE_MISMATCH})

    def test_recursion(self):
        source = "func f() { g(); } func g() { f(); } func main() { f(); }"
        self.assertIn(SemanticErrorKind.RECURSION, kinds(source))

    def test_entry(self):
        self.assertEqual(kinds("func f() { }"), {SemanticErrorKind.BAD_ENTRY})
        self.assertEqual(kinds("func main(int x) { }"), {SemanticErrorKind.BAD_ENTRY})

    def test_array_size(self):
        self.assertEqual(kinds("int a[0]; func main() { }"), {SemanticErrorKind.NON_CONST_ARRAY_SIZE})

    def test_array_misuse(self):
        self.assertEqual(kinds("int a[2]; func main() { a = 1; }"), {SemanticErrorKind.NOT_A_SCALAR})
        self.assertEqual(kinds("func main() { int b; b[0] = 1; }"), {SemanticErrorKind.NOT_AN_ARRAY})

    def test_missing_return_value(self):
        source = "func f() { } func main() { int x; x = f(); }"
        self.assertEqual(kinds(source), {SemanticErrorKind.MISSING_RETURN_VALUE})

    def test_arity(self):
        source = "func f(int a) { } func main() { f(); }"
        self.assertEqual(kinds(source), {SemanticErrorKind.ARITY})

    def test_load_source_raises(self):
        with self.assertRaises(ValidationFailed) as ctx:
            load_source("func main() { x = 1; }")
        self.assertEqual(len(ctx.exception.errors), 1)


class TestFeatures(unittest.TestCase):
    def test_extract_1(self):
        self.assertEqual(extract_features(parse(test_source_1)), FeatureSet(["inc"]))

    def test_benchmark_features(self):
        self.assertEqual(list(extract_features(load_benchmark("stack"))), ["pop", "push", "top"])
        self.assertEqual(list(extract_features(load_benchmark("queue"))),
                         ["dequeue", "dispose", "enqueue", "front", "isempty"])
        self.assertEqual(list(extract_features(load_benchmark("stacklist"))), ["dispose", "pop", "push", "top"])

    def test_featureless(self):
        self.assertEqual(len(extract_features(parse("func main() { }"))), 0)

    def test_feature_set_ops(self):
        f = FeatureSet(["b", "a", "b"])
        self.assertEqual(f.labels, ("a", "b"))
        self.assertEqual(f.union(["c"]), FeatureSet("abc"))
        self.assertEqual(f.difference(["a"]), FeatureSet(["b"]))
        self.assertEqual(f.intersection(["b", "z"]), FeatureSet(["b"]))
        self.assertTrue(FeatureSet(["a"]).issubset(f))
        self.assertEqual(str(f), "{a, b}")


class TestAst(unittest.TestCase):
    def test_ids_ignored_by_equality(self):
        self.assertEqual(Assign(Var("x"), IntLit(1), id=3), Assign(Var("x"), IntLit(1), id=9))


if __name__ == '__main__':
    unittest.main()
