"""Exceptions raised by swarm_bmc.

Every error carries a human readable message; the CLI prints it and exits
with the usage/input error code.
"""

from typing import Iterable, Optional


class SwarmBmcError(Exception):
    def __init__(self, msg: str):
        super().__init__(msg)
        self.msg = msg

    def __str__(self):
        return self.msg

    def __repr__(self):
        return f"{type(self).__name__}({self.msg!r})"


class ParseError(SwarmBmcError):
    """Syntax error with the position of the offending token."""

    def __init__(self, msg: str, line: int, column: int, expected: Optional[str] = None,
                 path: Optional[str] = None):
        where = f"{path or '<input>'}:{line}:{column}"
        text = f"{where}: {msg}"
        if expected is not None:
            text += f" (expected {expected})"
        super().__init__(text)
        self.line = line
        self.column = column
        self.expected = expected
        self.path = path


class ValidationFailed(SwarmBmcError):
    def __init__(self, errors: list):
        self.errors = list(errors)
        lines = "; ".join(str(e) for e in self.errors)
        super().__init__(f"program failed validation: {lines}")


class UnknownFeature(SwarmBmcError):
    def __init__(self, labels: Iterable[str]):
        self.labels = sorted(labels)
        super().__init__(f"unknown feature(s): {', '.join(self.labels)}")


class FeatureConflict(SwarmBmcError):
    def __init__(self, labels: Iterable[str]):
        self.labels = sorted(labels)
        super().__init__(f"feature(s) both omitted and required: {', '.join(self.labels)}")


class WidthOutOfRange(SwarmBmcError):
    def __init__(self, width: int):
        self.width = width
        super().__init__(f"bit width {width} is outside [2, 64]")


class SpaceTooLarge(SwarmBmcError):
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"tape space of {size} exceeds the oracle limit {limit}")


class NoViolatedSelector(SwarmBmcError):
    def __init__(self):
        super().__init__("model does not violate any assertion selector")


class DimacsError(SwarmBmcError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"DIMACS line {line}: {msg}")
        self.line = line


class CounterexampleSchemaError(SwarmBmcError):
    pass
