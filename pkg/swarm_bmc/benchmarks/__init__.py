"""Bundled benchmark programs: random harnesses over small container libraries."""

from pathlib import Path
from typing import Mapping, Optional

from swarm_bmc.errors import SwarmBmcError
from swarm_bmc.frontend import Program, load_program

BENCHMARK_DIR = Path(__file__).parent

BENCHMARKS = ("stack", "queue", "stacklist")

# leave-one-out statuses at the default sizes and depth
EXPECTED_STATUSES: dict[str, dict[str, str]] = {
    "stack": {"baseline": "counterexample", "pop": "counterexample", "push": "verified", "top": "counterexample"},
    "queue": {label: "counterexample" for label in ("baseline", "dequeue", "dispose", "enqueue", "front", "isempty")},
    "stacklist": {"baseline": "counterexample", "dispose": "counterexample", "pop": "counterexample",
                  "push": "counterexample", "top": "verified"},
}


def benchmark_path(name: str) -> Path:
    if name not in BENCHMARKS:
        raise SwarmBmcError(f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARKS)}")
    return BENCHMARK_DIR / f"{name}.imp"


def load_benchmark(name: str, defines: Optional[Mapping[str, int]] = None) -> Program:
    return load_program(benchmark_path(name), defines)


__all__ = ["BENCHMARKS", "BENCHMARK_DIR", "EXPECTED_STATUSES", "benchmark_path", "load_benchmark"]
