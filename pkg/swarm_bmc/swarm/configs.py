"""Swarm configurations: which features each variant omits."""

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from swarm_bmc.bmc.pipeline import BmcOptions
from swarm_bmc.config import MAX_EXHAUSTIVE_FEATURES
from swarm_bmc.errors import UnknownFeature
from swarm_bmc.frontend.features import FeatureSet


@dataclass(frozen=True)
class SwarmConfig:
    omitted: FeatureSet = FeatureSet()

    @property
    def label(self) -> str:
        return "+".join(self.omitted) or "baseline"

    @property
    def is_baseline(self) -> bool:
        return len(self.omitted) == 0

    def __str__(self):
        return self.label


BASELINE = SwarmConfig()


class Strategy(Enum):
    LEAVE_ONE_OUT = "leave-one-out"
    INDEPENDENT_HALF = "half"
    EXPLICIT = "explicit"
    ALL = "all"


@dataclass(frozen=True)
class SwarmOptions:
    strategy: Strategy = Strategy.LEAVE_ONE_OUT
    config_count: int = 8
    seed: int = 0
    jobs: int = 1
    per_run: BmcOptions = BmcOptions()
    keep_going: bool = False
    include_baseline: bool = True
    explicit: tuple[FeatureSet, ...] = ()
    # features every variant must exercise
    required: FeatureSet = FeatureSet()

    def __post_init__(self):
        if self.jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {self.jobs}")
        if self.strategy is Strategy.INDEPENDENT_HALF and self.config_count < 1:
            raise ValueError(f"config count must be at least 1, got {self.config_count}")


def dedupe(configs: Iterable[SwarmConfig]) -> list[SwarmConfig]:
    return list(dict.fromkeys(configs))


def sample_configs(features: FeatureSet, opts: SwarmOptions) -> list[SwarmConfig]:
    """Deterministic configuration list for the strategy in opts."""
    candidates = features.difference(opts.required)
    head = [BASELINE] if opts.include_baseline else []
    match opts.strategy:
        case Strategy.LEAVE_ONE_OUT:
            sampled = [SwarmConfig(FeatureSet([label])) for label in candidates]
        case Strategy.INDEPENDENT_HALF:
            rng = random.Random(opts.seed)
            sampled = []
            for _ in range(opts.config_count):
                sampled.append(SwarmConfig(FeatureSet(label for label in candidates if rng.random() < 0.5)))
            if opts.include_baseline:
                sampled = [c for c in sampled if not c.is_baseline]
        case Strategy.ALL:
            if len(candidates) > MAX_EXHAUSTIVE_FEATURES:
                raise ValueError(f"{len(candidates)} features is too many for the exhaustive strategy "
                                 f"(limit {MAX_EXHAUSTIVE_FEATURES})")
            sampled = [SwarmConfig(FeatureSet(subset))
                       for size in range(1, len(candidates) + 1)
                       for subset in itertools.combinations(candidates, size)]
        case Strategy.EXPLICIT:
            unknown = FeatureSet(label for omitted in opts.explicit for label in omitted).difference(features)
            if unknown:
                raise UnknownFeature(unknown)
            return dedupe(SwarmConfig(FeatureSet(omitted)) for omitted in opts.explicit)
    return dedupe(head + sampled)
