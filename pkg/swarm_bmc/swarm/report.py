"""Aggregation of per-configuration outcomes into a swarm verdict."""

from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from swarm_bmc.bmc.counterexample import Counterexample
from swarm_bmc.bmc.pipeline import Status, VerificationOutcome
from swarm_bmc.swarm.configs import SwarmConfig


@dataclass(frozen=True)
class Falsified:
    counterexample: Counterexample
    config: SwarmConfig

    kind = "falsified"


@dataclass(frozen=True)
class VerifiedToDepth:
    depth: int

    kind = "verified"


@dataclass(frozen=True)
class PartiallyVerified:
    configs: tuple[SwarmConfig, ...]

    kind = "partially_verified"


@dataclass(frozen=True)
class Inconclusive:
    kind = "inconclusive"


type Verdict = Falsified | VerifiedToDepth | PartiallyVerified | Inconclusive


def aggregate(results: Iterable[tuple[SwarmConfig, VerificationOutcome]], include_baseline_ran: bool = True) -> Verdict:
    """Combine outcomes; the first counterexample in the given order wins.

    Only a verified baseline (nothing omitted) verifies the program itself;
    other verified configurations certify the traces avoiding their omitted
    features.
    """
    results = list(results)
    for config, outcome in results:
        if outcome.status is Status.COUNTEREXAMPLE:
            return Falsified(outcome.counterexample, config)
    verified = [(config, outcome) for config, outcome in results if outcome.status is Status.VERIFIED]
    if include_baseline_ran:
        for config, outcome in verified:
            if config.is_baseline:
                return VerifiedToDepth(outcome.depth)
    if verified:
        return PartiallyVerified(tuple(config for config, _ in verified))
    return Inconclusive()


def verdict_json(verdict: Verdict) -> dict[str, Any]:
    data: dict[str, Any] = {"kind": verdict.kind}
    match verdict:
        case Falsified(cex, config):
            data["config"] = config.label
            data["violated_assert"] = {"file": cex.location.file, "line": cex.location.line}
        case VerifiedToDepth(depth):
            data["depth"] = depth
        case PartiallyVerified(configs):
            data["configs"] = [config.label for config in configs]
    return data


@dataclass(frozen=True)
class ConfigResult:
    config: SwarmConfig
    outcome: VerificationOutcome
    # replay of the counterexample on the base program, when there is one
    replayed: Optional[bool] = None

    def to_json(self) -> dict[str, Any]:
        cex = self.outcome.counterexample
        return {
            "omitted": list(self.config.omitted),
            "label": self.config.label,
            "status": self.outcome.status.value,
            "reason": self.outcome.reason,
            "metrics": {
                "vars": self.outcome.metrics.num_vars,
                "clauses": self.outcome.metrics.num_clauses,
                "solve_ms": round(self.outcome.metrics.solve_ms, 3),
            },
            "counterexample": None if cex is None else cex.to_json(),
        }


@dataclass(frozen=True)
class SwarmReport:
    per_config: tuple[ConfigResult, ...]
    verdict: Verdict
    wall_time_ms: float = field(default=0.0, compare=False)
    seed: int = 0

    def outcome_of(self, label: str) -> VerificationOutcome:
        for result in self.per_config:
            if result.config.label == label:
                return result.outcome
        raise KeyError(label)

    @property
    def statuses(self) -> dict[str, str]:
        return {result.config.label: result.outcome.status.value for result in self.per_config}

    @property
    def counterexamples(self) -> list[Counterexample]:
        return [r.outcome.counterexample for r in self.per_config if r.outcome.counterexample is not None]

    def to_json(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "verdict": verdict_json(self.verdict),
            "configs": [result.to_json() for result in self.per_config],
            "wall_time_ms": round(self.wall_time_ms, 3),
        }
