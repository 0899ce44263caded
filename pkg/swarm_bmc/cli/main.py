"""Command line front end: features, check, swarm, replay, solve and bench."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from swarm_bmc import __version__
from swarm_bmc.benchmarks import BENCHMARKS, EXPECTED_STATUSES, benchmark_path, load_benchmark
from swarm_bmc.bmc.counterexample import counterexample_from_json
from swarm_bmc.bmc.pipeline import BACKENDS, BmcOptions, Status, prepare, solve_prepared, validate_outcome
from swarm_bmc.cli.manifest import RunManifest
from swarm_bmc.cli.reporting import outcome_text, swarm_table, verdict_text
from swarm_bmc.config import DEFAULT_DEPTH, DEFAULT_WIDTH, default_log_level, default_seed
from swarm_bmc.encode.bitblast import export_dimacs
from swarm_bmc.encode.cnf import parse_dimacs
from swarm_bmc.errors import SwarmBmcError
from swarm_bmc.frontend import FeatureSet, Program, extract_features, load_program
from swarm_bmc.interp.replay import replay
from swarm_bmc.sat.cdcl import Sat, SolveBudget, Unsat
from swarm_bmc.sat.z3_backend import solve_with
from swarm_bmc.swarm.configs import Strategy, SwarmOptions
from swarm_bmc.swarm.orchestrator import run_swarm
from swarm_bmc.transform.ssa import dump_ssa
from swarm_bmc.transform.variants import make_variant

logger = logging.getLogger(__name__)

EXIT_VERIFIED = 0
EXIT_NOT_CONFIRMED = 1
EXIT_USAGE = 2
EXIT_FALSIFIED = 10
EXIT_RESOURCE_OUT = 20
EXIT_PARTIAL = 30

STATUS_EXIT = {
    Status.VERIFIED: EXIT_VERIFIED,
    Status.COUNTEREXAMPLE: EXIT_FALSIFIED,
    Status.RESOURCE_OUT: EXIT_RESOURCE_OUT,
}

VERDICT_EXIT = {
    "falsified": EXIT_FALSIFIED,
    "verified": EXIT_VERIFIED,
    "partially_verified": EXIT_PARTIAL,
    "inconclusive": EXIT_RESOURCE_OUT,
}

STRATEGIES = {
    "leave-one-out": Strategy.LEAVE_ONE_OUT,
    "half": Strategy.INDEPENDENT_HALF,
    "all": Strategy.ALL,
}


def define(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"constant {name.strip()} needs an integer value, got {value!r}")


def labels(text: str) -> list[str]:
    return [label.strip() for label in text.split(",") if label.strip()]


def resolve_source(path: str) -> Path:
    """A missing path named like a bundled benchmark resolves to the bundled file"""
    candidate = Path(path)
    if candidate.exists():
        return candidate
    if candidate.parent == Path(".") and candidate.suffix == ".imp" and candidate.stem in BENCHMARKS:
        logger.info("using bundled benchmark %s", candidate.stem)
        return benchmark_path(candidate.stem)
    raise SwarmBmcError(f"{path}: no such file")


def load(args: argparse.Namespace) -> Program:
    args.source = resolve_source(args.file)
    return load_program(args.source, dict(args.define))


def bmc_options(args: argparse.Namespace) -> BmcOptions:
    return BmcOptions(
        depth=args.depth,
        width=args.width,
        slicing=args.slice,
        budget=SolveBudget(args.max_conflicts, args.timeout),
        seed=args.seed,
        backend=args.backend,
    )


def emit_json(args: argparse.Namespace, payload: dict[str, Any], source: Optional[Path] = None):
    options = {k: v for k, v in vars(args).items() if k not in ("func", "argv", "source")}
    manifest = RunManifest.build(args.argv, options, source)
    print(json.dumps({"manifest": manifest.to_json(), **payload}, indent=2))


def cmd_features(args: argparse.Namespace) -> int:
    program = load(args)
    for label in extract_features(program):
        print(label)
    return EXIT_VERIFIED


def cmd_check(args: argparse.Namespace) -> int:
    program = load(args)
    opts = bmc_options(args)
    variant = make_variant(program, args.omit, args.require)
    prepared = prepare(variant, opts)
    if args.emit_ssa:
        print(dump_ssa(prepared.sliced), file=sys.stderr)
    if args.dimacs is not None:
        with open(args.dimacs, "w") as sink:
            export_dimacs(prepared.encoded, sink)
        logger.info("wrote %s", args.dimacs)
    outcome = validate_outcome(program, solve_prepared(prepared, opts))
    if args.json:
        emit_json(args, outcome.to_json(), args.source)
    else:
        print(outcome_text(outcome, args.stats))
    return STATUS_EXIT[outcome.status]


def cmd_swarm(args: argparse.Namespace) -> int:
    program = load(args)
    opts = SwarmOptions(
        strategy=STRATEGIES[args.strategy],
        config_count=args.configs,
        seed=args.seed,
        jobs=args.jobs,
        per_run=bmc_options(args),
        keep_going=args.keep_going,
        required=FeatureSet(args.require),
    )
    report = run_swarm(program, opts)
    if args.json:
        emit_json(args, report.to_json(), args.source)
    else:
        print(swarm_table(report))
        print(verdict_text(report))
    return VERDICT_EXIT[report.verdict.kind]


def cmd_replay(args: argparse.Namespace) -> int:
    program = load(args)
    try:
        data = json.loads(Path(args.trace).read_text())
    except json.JSONDecodeError as exc:
        raise SwarmBmcError(f"{args.trace}: not JSON ({exc})")
    # a full check report nests the counterexample
    if isinstance(data, dict) and isinstance(data.get("counterexample"), dict):
        data = data["counterexample"]
    cex = counterexample_from_json(data)
    if replay(program, cex):
        print(f"confirmed: {cex.kind} at {cex.location}")
        return EXIT_VERIFIED
    print(f"not confirmed: {cex.location} is not violated by the tape")
    return EXIT_NOT_CONFIRMED


def cmd_solve(args: argparse.Namespace) -> int:
    text = Path(args.dimacs_in).read_text() if args.dimacs_in else sys.stdin.read()
    cnf = parse_dimacs(text)
    result = solve_with(args.backend, cnf, SolveBudget(args.max_conflicts, args.timeout), args.seed)
    match result:
        case Sat(model):
            print("SAT")
            values = model.dimacs()
            print(f"v {values} 0" if values else "v 0")
            return EXIT_FALSIFIED
        case Unsat():
            print("UNSAT")
            return EXIT_VERIFIED
    print("UNKNOWN")
    return EXIT_RESOURCE_OUT


def cmd_bench(args: argparse.Namespace) -> int:
    matched = True
    for name in args.benchmarks or BENCHMARKS:
        program = load_benchmark(name)
        for slicing in (False, True):
            opts = SwarmOptions(
                strategy=Strategy.LEAVE_ONE_OUT,
                seed=args.seed,
                jobs=args.jobs,
                per_run=BmcOptions(depth=args.depth, width=args.width, slicing=slicing, backend=args.backend),
                keep_going=True,
            )
            report = run_swarm(program, opts)
            ok = report.statuses == EXPECTED_STATUSES[name]
            matched = matched and ok
            print(f"{name} ({'sliced' if slicing else 'unsliced'}): {'ok' if ok else 'MISMATCH'}")
            print(swarm_table(report))
            print()
    return EXIT_VERIFIED if matched else EXIT_NOT_CONFIRMED


def add_common(p: argparse.ArgumentParser):
    p.add_argument("-v", "--verbose", action="count", default=0, help="More logging (repeatable)")
    p.add_argument("--log-level", default=None, help="Log level name, overrides -v")


def add_source(p: argparse.ArgumentParser):
    p.add_argument("file", help="Program source (bundled benchmarks may be named directly, e.g. stack.imp)")
    p.add_argument("-D", "--define", type=define, action="append", default=[], metavar="NAME=VALUE",
                   help="Override a program constant (repeatable)")


def add_solver(p: argparse.ArgumentParser):
    p.add_argument("--backend", choices=BACKENDS, default="cdcl", help="SAT backend")
    p.add_argument("--seed", type=int, default=default_seed(), help="Solver and sampling seed")
    p.add_argument("--max-conflicts", type=int, default=None, help="Conflict budget per solve")
    p.add_argument("--timeout", type=float, default=None, help="Time budget per solve in seconds")


def add_bmc(p: argparse.ArgumentParser):
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="Unwinding bound per loop")
    p.add_argument("--width", type=int, default=DEFAULT_WIDTH, help="Integer bit width")
    p.add_argument("--slice", action="store_true", help="Propagate assumptions and slice before encoding")
    add_solver(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarm-bmc",
                                     description="Bounded model checking with feature-omission swarms")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    feat = sub.add_parser("features", help="List the feature labels of a program")
    add_source(feat)
    add_common(feat)
    feat.set_defaults(func=cmd_features)

    chk = sub.add_parser("check", help="Bounded check of one variant")
    add_source(chk)
    add_bmc(chk)
    chk.add_argument("--omit", type=labels, default=[], help="Comma separated features to omit")
    chk.add_argument("--require", type=labels, default=[], help="Comma separated features every trace must use")
    chk.add_argument("--dimacs", default=None, metavar="PATH", help="Also write the CNF instance")
    chk.add_argument("--emit-ssa", action="store_true", help="Print the (sliced) SSA form to stderr")
    chk.add_argument("--stats", action="store_true", help="Print encoding and solving statistics")
    chk.add_argument("--json", action="store_true", help="Machine readable report")
    add_common(chk)
    chk.set_defaults(func=cmd_check)

    swm = sub.add_parser("swarm", help="Check a swarm of feature-omission variants")
    add_source(swm)
    add_bmc(swm)
    swm.add_argument("--strategy", choices=sorted(STRATEGIES), default="leave-one-out",
                     help="How configurations are sampled")
    swm.add_argument("--configs", type=int, default=8, help="Number of sampled configurations (half)")
    swm.add_argument("--jobs", type=int, default=1, help="Parallel workers")
    swm.add_argument("--keep-going", action="store_true", help="Do not stop at the first counterexample")
    swm.add_argument("--require", type=labels, default=[], help="Features every configuration must use")
    swm.add_argument("--json", action="store_true", help="Machine readable report")
    add_common(swm)
    swm.set_defaults(func=cmd_swarm)

    rep = sub.add_parser("replay", help="Replay a counterexample on a program")
    add_source(rep)
    rep.add_argument("--trace", required=True, help="Counterexample JSON")
    add_common(rep)
    rep.set_defaults(func=cmd_replay)

    slv = sub.add_parser("solve", help="Solve a DIMACS CNF")
    slv.add_argument("--dimacs-in", default=None, metavar="PATH", help="Input file (default: stdin)")
    add_solver(slv)
    add_common(slv)
    slv.set_defaults(func=cmd_solve)

    bch = sub.add_parser("bench", help="Reproduce the status tables of the bundled benchmarks")
    bch.add_argument("benchmarks", nargs="*", metavar="NAME", help=f"Subset of {', '.join(BENCHMARKS)}")
    bch.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    bch.add_argument("--width", type=int, default=DEFAULT_WIDTH)
    bch.add_argument("--jobs", type=int, default=1)
    bch.add_argument("--backend", choices=BACKENDS, default="cdcl")
    bch.add_argument("--seed", type=int, default=default_seed())
    add_common(bch)
    bch.set_defaults(func=cmd_bench)
    return parser


def configure_logging(verbose: int, level: Optional[str]):
    if level is None:
        level = {0: default_log_level(), 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(stream=sys.stderr, level=level.upper(),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        configure_logging(args.verbose, args.log_level)
        return args.func(args)
    except (SwarmBmcError, ValueError, OSError) as exc:
        print(f"swarm-bmc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
