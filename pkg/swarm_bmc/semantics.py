"""Fixed-width two's-complement arithmetic.

The interpreter, the SSA simplifier and the SSA evaluator all compute through
these functions, so the concrete semantics live in exactly one place. Values
are Python ints kept in the signed range of the given width; booleans are
Python bools.
"""

ARITHMETIC_OPS = frozenset({"+", "-", "*", "/", "%"})
COMPARISON_OPS = frozenset({"<", "<=", ">", ">=", "==", "!="})
LOGICAL_OPS = frozenset({"&&", "||"})


def wrap(value: int, width: int) -> int:
    modulus = 1 << width
    value &= modulus - 1
    if value >= modulus >> 1:
        value -= modulus
    return value


def to_unsigned(value: int, width: int) -> int:
    return value & ((1 << width) - 1)


def truncated_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def apply_unary(op: str, value, width: int):
    match op:
        case "-":
            return wrap(-value, width)
        case "!":
            return not value
    raise ValueError(f"unknown unary operator {op!r}")


def apply_binary(op: str, left, right, width: int):
    """Evaluate a binary operator. Division by zero yields 0; callers check first."""
    match op:
        case "+":
            return wrap(left + right, width)
        case "-":
            return wrap(left - right, width)
        case "*":
            return wrap(left * right, width)
        case "/":
            if right == 0:
                return 0
            return wrap(truncated_div(left, right), width)
        case "%":
            if right == 0:
                return 0
            return wrap(left - truncated_div(left, right) * right, width)
        case "<":
            return left < right
        case "<=":
            return left <= right
        case ">":
            return left > right
        case ">=":
            return left >= right
        case "==":
            return left == right
        case "!=":
            return left != right
        case "&&":
            return bool(left and right)
        case "||":
            return bool(left or right)
    raise ValueError(f"unknown binary operator {op!r}")
