"""Counterexamples: decoding from a SAT model and the JSON exchange format.

    {"config": {"omitted": [...], "required": [...]},
     "depth": k, "width": w, "tape": [...],
     "violated_assert": {"file": ..., "line": ..., "column": ..., "id": ..., "kind": ...},
     "trace": [{"line": ..., "vars": {...}}, ...]}

`width`, `column`, `id` and `kind` are optional on input; without an `id` a
replay matches the violation by line.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Optional

from swarm_bmc.config import DEFAULT_WIDTH
from swarm_bmc.encode.bitblast import EncodedInstance
from swarm_bmc.errors import CounterexampleSchemaError, NoViolatedSelector
from swarm_bmc.frontend.features import FeatureSet
from swarm_bmc.frontend.syntax import Program, SourceLocation
from swarm_bmc.interp.interpreter import NondetTape, TraceStep, execute
from swarm_bmc.interp.ssa_eval import run_ssa
from swarm_bmc.sat.cdcl import Model
from swarm_bmc.semantics import wrap
from swarm_bmc.transform.ssa import AssertStep, SsaProgram

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Counterexample:
    tape: NondetTape
    violated_assert: int
    location: SourceLocation
    violated_step: int = -1
    trace: tuple[TraceStep, ...] = field(default=(), compare=False)
    depth: int = 0
    width: int = DEFAULT_WIDTH
    omitted: FeatureSet = FeatureSet()
    required: FeatureSet = FeatureSet()
    kind: str = "assert"

    def __str__(self):
        return f"{self.kind} violated at {self.location} with tape {self.tape}"

    def to_json(self) -> dict[str, Any]:
        return {
            "config": {"omitted": list(self.omitted), "required": list(self.required)},
            "depth": self.depth,
            "width": self.width,
            "tape": list(self.tape),
            "violated_assert": {
                "file": self.location.file,
                "line": self.location.line,
                "column": self.location.column,
                "id": self.violated_assert,
                "kind": self.kind,
            },
            "trace": [{"line": step.line, "vars": dict(step.values)} for step in self.trace],
        }


def expect(data: dict, key: str, kind: type | tuple[type, ...], where: str = "counterexample"):
    if key not in data:
        raise CounterexampleSchemaError(f"{where} is missing {key!r}")
    value = data[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise CounterexampleSchemaError(f"{where}.{key} has the wrong type")
    return value


def counterexample_from_json(data: Any) -> Counterexample:
    if not isinstance(data, dict):
        raise CounterexampleSchemaError("counterexample must be a JSON object")
    config = expect(data, "config", dict)
    omitted = expect(config, "omitted", list, "config")
    required = expect(config, "required", list, "config")
    if not all(isinstance(label, str) for label in omitted + required):
        raise CounterexampleSchemaError("feature labels must be strings")
    depth = expect(data, "depth", int)
    width = data.get("width", DEFAULT_WIDTH)
    if not isinstance(width, int) or isinstance(width, bool):
        raise CounterexampleSchemaError("counterexample.width has the wrong type")
    tape = expect(data, "tape", list)
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in tape):
        raise CounterexampleSchemaError("tape values must be integers")
    violated = expect(data, "violated_assert", dict)
    file = expect(violated, "file", str, "violated_assert")
    line = expect(violated, "line", int, "violated_assert")
    column = violated.get("column", 0)
    stmt_id = violated.get("id", -1)
    if not isinstance(column, int) or not isinstance(stmt_id, int):
        raise CounterexampleSchemaError("violated_assert.column and .id must be integers")
    # the trace is informational; replay re-derives it from the tape
    for entry in expect(data, "trace", list):
        if not isinstance(entry, dict):
            raise CounterexampleSchemaError("trace entries must be objects")
        expect(entry, "line", int, "trace entry")
        expect(entry, "vars", dict, "trace entry")
    return Counterexample(NondetTape(tape), stmt_id, SourceLocation(file, line, column), depth=depth,
                          width=width, omitted=FeatureSet(omitted), required=FeatureSet(required),
                          kind=str(violated.get("kind", "assert")))


def word_value(model: Model, lits: list[int], width: int) -> int:
    return wrap(sum(1 << i for i, lit in enumerate(lits) if model.lit(lit)), width)


def decode_model(m: Model, e: EncodedInstance, s: SsaProgram, base: Program, depth: Optional[int] = None,
                 omitted: FeatureSet = FeatureSet(), required: FeatureSet = FeatureSet()) -> Counterexample:
    """Read a counterexample off a model of e.

    s is the SSA program before slicing: the havocs executed before the
    violated assertion are found by evaluating it on the model's nondet values.
    The trace comes from interpreting base on the resulting tape.
    """
    true_selectors = [aid for aid, lit in e.assert_selectors.items() if m.lit(lit)]
    if not true_selectors:
        raise NoViolatedSelector()
    position = {step.aid: i for i, step in enumerate(s.steps) if isinstance(step, AssertStep)}
    aid = min(true_selectors, key=lambda a: position.get(a, a))
    values = {name: word_value(m, e.var_map[name], e.width) for name in e.nondet_names}
    run = run_ssa(s, values)
    if run.violated is None or run.violated.aid != aid:
        logger.warning("SSA evaluation of the model disagrees with selector %d", aid)
    nondet_positions = {step.name: i for i, step in s.nondets}
    cutoff = position.get(aid, len(s.steps))
    tape = NondetTape([run.env[name] for name in run.executed if nondet_positions[name] < cutoff], e.width)
    step = s.steps[cutoff]
    outcome = execute(base, tape, width=e.width, record_trace=True)
    return Counterexample(tape, step.stmt_id, base.location(step.stmt_id),
                          outcome.step_index if outcome.step_index is not None else -1,
                          outcome.trace, s.unwind_bound if depth is None else depth, e.width,
                          omitted, required, step.kind)
