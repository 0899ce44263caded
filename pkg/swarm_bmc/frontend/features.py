"""Features are the distinct labels of `log` statements."""

from dataclasses import dataclass
from typing import Iterable, Iterator

from swarm_bmc.frontend.syntax import For, If, Log, Program, Stmt, While


@dataclass(frozen=True, init=False)
class FeatureSet:
    """Deduplicated labels kept in lexicographic order"""
    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str] = ()):
        object.__setattr__(self, "labels", tuple(sorted(set(labels))))

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def __str__(self):
        return "{" + ", ".join(self.labels) + "}"

    def union(self, other: Iterable[str]) -> "FeatureSet":
        return FeatureSet((*self.labels, *other))

    def intersection(self, other: Iterable[str]) -> "FeatureSet":
        keep = set(other)
        return FeatureSet(label for label in self.labels if label in keep)

    def difference(self, other: Iterable[str]) -> "FeatureSet":
        drop = set(other)
        return FeatureSet(label for label in self.labels if label not in drop)

    def issubset(self, other: Iterable[str]) -> bool:
        return set(self.labels) <= set(other)


def log_labels(body: tuple[Stmt, ...]) -> Iterator[str]:
    for stmt in body:
        match stmt:
            case Log(label):
                yield label
            case If(_, then, orelse):
                yield from log_labels(then)
                yield from log_labels(orelse)
            case While(_, inner) | For(body=inner):
                yield from log_labels(inner)


def extract_features(program: Program) -> FeatureSet:
    labels: set[str] = set()
    for func in program.functions:
        labels.update(log_labels(func.body))
    return FeatureSet(labels)
