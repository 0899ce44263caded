"""Run the variants of a swarm, validate counterexamples and build the report.

Workers share nothing: each receives the base program, its omission set and
the per-run options, builds its own variant and runs the whole pipeline. The
only thing flowing back is the VerificationOutcome. A manager Event is the
cooperative cancel flag, polled between pipeline stages and at solver
restarts.
"""

import logging
import multiprocessing
import time
from concurrent.futures import Future, ProcessPoolExecutor, as_completed
from dataclasses import replace
from typing import Optional

from swarm_bmc.bmc.pipeline import BmcOptions, Metrics, Status, VerificationOutcome, check, validate_outcome
from swarm_bmc.frontend.features import FeatureSet, extract_features
from swarm_bmc.frontend.syntax import Program
from swarm_bmc.sat.cdcl import CancelFlag
from swarm_bmc.swarm.configs import SwarmOptions, sample_configs
from swarm_bmc.swarm.report import ConfigResult, SwarmReport, aggregate
from swarm_bmc.transform.variants import make_variant

logger = logging.getLogger(__name__)


def get_worker_count(requested: int) -> int:
    logical_cores = multiprocessing.cpu_count()
    if requested > logical_cores:
        logger.warning("requested workers (%d) exceeds logical cores (%d); capping to %d",
                       requested, logical_cores, logical_cores)
        return logical_cores
    return max(1, requested)


def run_config(p: Program, omitted: FeatureSet, required: FeatureSet, per_run: BmcOptions,
               cancel: Optional[CancelFlag] = None) -> VerificationOutcome:
    """Worker entry point; must stay a picklable top-level function"""
    if cancel is not None and cancel.is_set():
        return cancelled(per_run)
    return check(make_variant(p, omitted, required), per_run, cancel)


def cancelled(per_run: BmcOptions) -> VerificationOutcome:
    return VerificationOutcome(Status.RESOURCE_OUT, per_run.depth, Metrics(sliced=per_run.slicing),
                               reason="cancelled")


class Orchestrator:
    def __init__(self, p: Program, opts: SwarmOptions):
        self.program = p
        self.opts = opts
        self.configs = sample_configs(extract_features(p), opts)
        self.per_run = replace(opts.per_run, seed=opts.seed)
        self.results: dict[int, ConfigResult] = {}
        # indices in completion order
        self.finished: list[int] = []

    def validate(self, index: int, outcome: VerificationOutcome) -> ConfigResult:
        config = self.configs[index]
        if outcome.status is not Status.COUNTEREXAMPLE:
            return ConfigResult(config, outcome)
        validated = validate_outcome(self.program, outcome)
        if validated is not outcome:
            logger.error("dropping counterexample of config %s", config.label)
        return ConfigResult(config, validated, validated is outcome)

    def record(self, index: int, outcome: VerificationOutcome) -> bool:
        """Store a finished config; True when the swarm should stop"""
        result = self.validate(index, outcome)
        self.results[index] = result
        self.finished.append(index)
        logger.info("config %s finished: %s", result.config.label, result.outcome.status.value)
        return result.replayed is True and not self.opts.keep_going

    def run_serial(self):
        for index, config in enumerate(self.configs):
            logger.info("config %s started", config.label)
            outcome = run_config(self.program, config.omitted, self.opts.required, self.per_run)
            if self.record(index, outcome):
                break

    def run_parallel(self):
        workers = get_worker_count(self.opts.jobs)
        with multiprocessing.Manager() as manager:
            cancel = manager.Event()
            with ProcessPoolExecutor(max_workers=workers) as executor:
                future_to_idx: dict[Future, int] = {
                    executor.submit(run_config, self.program, config.omitted, self.opts.required, self.per_run,
                                    cancel): idx
                    for idx, config in enumerate(self.configs)
                }
                stopping = False
                for future in as_completed(future_to_idx):
                    idx = future_to_idx[future]
                    if future.cancelled():
                        continue
                    try:
                        outcome = future.result()
                    except Exception as exc:
                        logger.error("config %s generated exception: %s", self.configs[idx].label, exc)
                        raise
                    if stopping:
                        continue
                    if self.record(idx, outcome):
                        stopping = True
                        cancel.set()
                        for pending in future_to_idx:
                            pending.cancel()

    def run(self) -> SwarmReport:
        start = time.perf_counter()
        if self.opts.jobs == 1 or len(self.configs) <= 1:
            self.run_serial()
        else:
            self.run_parallel()
        per_config = tuple(self.results.get(i) or ConfigResult(config, cancelled(self.per_run))
                           for i, config in enumerate(self.configs))
        verdict = aggregate(((self.results[i].config, self.results[i].outcome) for i in self.finished),
                            include_baseline_ran=any(self.configs[i].is_baseline for i in self.finished))
        wall = (time.perf_counter() - start) * 1000
        logger.info("swarm of %d configs finished in %.1f ms: %s", len(self.configs), wall, verdict.kind)
        return SwarmReport(per_config, verdict, wall, self.opts.seed)


def run_swarm(p: Program, opts: SwarmOptions = SwarmOptions()) -> SwarmReport:
    """Check every sampled variant of p and aggregate the validated results."""
    return Orchestrator(p, opts).run()
